#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ncma/constellation.hpp"
#include "ncma/simkit.hpp"

namespace ncma {

// Design catalog: a JSON document with one record per user holding user_id,
// M, phases in degrees (12 significant digits) and the bit label of every
// phase index.
std::string catalog_to_json(std::span<const IndividualConstellation> constellations,
                            Criterion criterion);

struct Catalog {
    Criterion criterion = Criterion::eep;
    std::vector<IndividualConstellation> constellations;
};

// Parses and validates a catalog; throws InvalidArgument on malformed input.
Catalog catalog_from_json(const std::string& text);

// Rounds to 12 significant digits, the catalog's angle precision.
double round_significant12(double v);

// CSV: tuple,re,im with the tuple written as colon-separated symbol indices.
void write_joint_csv(std::ostream& os, const JointConstellation& joint);

// CSV: t,re,im,sent for detection-statistic point clouds.
void write_cloud_csv(std::ostream& os, std::span<const CloudSample> cloud);

} // namespace ncma
