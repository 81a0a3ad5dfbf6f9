#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ncma::cli {

enum ExitCode : int { ok = 0, refused = 1, usage = 2 };

// Runs one command line (args excludes the program name). Reports and CSV
// without an --out path go to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace ncma::cli
