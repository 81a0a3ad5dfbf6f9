#include "ncma/constellation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace ncma {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint32_t gray(std::uint32_t n) { return n ^ (n >> 1); }

std::vector<std::size_t> order_by_real(const std::vector<Complex>& points) {
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return points[a].real() < points[b].real();
    });
    return order;
}

// Plane sweep over points sorted by real part; a pair is only examined while
// the real-axis gap is below the current best distance.
double closest_pair_distance(const std::vector<Complex>& points) {
    if (points.size() < 2) return std::numeric_limits<double>::infinity();
    const auto order = order_by_real(points);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Complex& a = points[order[i]];
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const Complex& b = points[order[j]];
            if (b.real() - a.real() >= best) break;
            best = std::min(best, std::abs(a - b));
        }
    }
    return best;
}

} // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && std::has_single_bit(n); }

int log2_exact(std::size_t n) {
    require(is_power_of_two(n), "value is not a power of two: " + std::to_string(n));
    return std::countr_zero(n);
}

double wrap_phase(double radians) {
    double w = std::fmod(radians, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

double circular_distance(double a, double b) {
    const double d = wrap_phase(a - b);
    return std::min(d, kTwoPi - d);
}

// ---------------------------------------------------------------------------
// IndividualConstellation

IndividualConstellation::IndividualConstellation(int user_id, std::vector<double> phases)
    : user_id_(user_id), bits_(0), phases_(std::move(phases)) {
    validate_phases();
    labels_.assign(order(), 0);
    const auto sorted = sorted_indices();
    for (std::size_t j = 0; j < sorted.size(); ++j)
        labels_[sorted[j]] = gray(static_cast<std::uint32_t>(j));
    index_labels();
}

IndividualConstellation::IndividualConstellation(int user_id, std::vector<double> phases,
                                                 std::vector<std::uint32_t> labels)
    : user_id_(user_id), bits_(0), phases_(std::move(phases)), labels_(std::move(labels)) {
    validate_phases();
    require(labels_.size() == order(), "bit map length does not match constellation order");
    index_labels();
    const auto sorted = sorted_indices();
    for (std::size_t j = 0; j < sorted.size() && order() > 2; ++j) {
        const auto a = labels_[sorted[j]];
        const auto b = labels_[sorted[(j + 1) % sorted.size()]];
        require(std::popcount(a ^ b) == 1, "bit map is not Gray over sorted phases");
    }
}

void IndividualConstellation::validate_phases() {
    require(user_id_ >= 0, "user id must be non-negative");
    require(phases_.size() >= 2 && is_power_of_two(phases_.size()),
            "constellation order must be a power of two >= 2");
    bits_ = log2_exact(phases_.size());
    for (double& p : phases_) {
        require(std::isfinite(p), "phase is not finite");
        p = wrap_phase(p);
    }
    const auto sorted = sorted_indices();
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        const double a = phases_[sorted[j]];
        const double b = phases_[sorted[(j + 1) % sorted.size()]];
        if (circular_distance(a, b) <= kPhaseTolerance)
            throw InvalidArgument("duplicate phases in constellation of user " +
                                  std::to_string(user_id_));
    }
}

void IndividualConstellation::index_labels() {
    label_to_index_.assign(order(), order());
    for (std::size_t i = 0; i < order(); ++i) {
        const auto l = labels_[i];
        require(l < order(), "bit label out of range");
        require(label_to_index_[l] == order(), "bit map is not a bijection");
        label_to_index_[l] = i;
    }
}

Complex IndividualConstellation::symbol(std::size_t index) const {
    return std::polar(1.0, phases_.at(index));
}

std::string IndividualConstellation::bit_string(std::size_t index) const {
    const auto l = labels_.at(index);
    std::string s(static_cast<std::size_t>(bits_), '0');
    for (int b = 0; b < bits_; ++b)
        if ((l >> (bits_ - 1 - b)) & 1u) s[static_cast<std::size_t>(b)] = '1';
    return s;
}

std::vector<std::size_t> IndividualConstellation::sorted_indices() const {
    std::vector<std::size_t> idx(phases_.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return phases_[a] < phases_[b]; });
    return idx;
}

double IndividualConstellation::min_chord_distance() const {
    double best = std::numeric_limits<double>::infinity();
    const auto sorted = sorted_indices();
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        const double gap = circular_distance(phases_[sorted[j]],
                                             phases_[sorted[(j + 1) % sorted.size()]]);
        best = std::min(best, 2.0 * std::sin(gap / 2.0));
    }
    return best;
}

// ---------------------------------------------------------------------------
// JointConstellation

std::span<const std::uint32_t> JointConstellation::tuple(std::size_t p) const {
    if (p >= size()) throw std::out_of_range("joint point index out of range");
    return {demap_.data() + p * users(), users()};
}

std::size_t JointConstellation::index_of(std::span<const std::uint32_t> tuple) const {
    require(tuple.size() == users(), "tuple length does not match user count");
    std::size_t p = 0;
    for (std::size_t k = 0; k < users(); ++k) {
        require(tuple[k] < orders_[k], "tuple entry out of range");
        p = p * orders_[k] + tuple[k];
    }
    return p;
}

std::string format_tuple(std::span<const std::uint32_t> tuple) {
    std::ostringstream os;
    os << '(';
    for (std::size_t k = 0; k < tuple.size(); ++k) os << (k ? "," : "") << tuple[k];
    os << ')';
    return os.str();
}

std::string to_string(Criterion c) { return c == Criterion::eep ? "eep" : "uep"; }

Criterion parse_criterion(const std::string& s) {
    if (s == "eep" || s == "EEP") return Criterion::eep;
    if (s == "uep" || s == "UEP") return Criterion::uep;
    throw InvalidArgument("unknown criterion: " + s);
}

JointConstellation build_joint(std::span<const IndividualConstellation> constellations,
                               std::span<const double> gains) {
    require(!constellations.empty(), "at least one constellation is required");
    require(gains.size() == constellations.size(), "one gain per constellation is required");
    for (double g : gains) require(std::isfinite(g) && g > 0.0, "gains must be positive");

    JointConstellation joint;
    joint.gains_.assign(gains.begin(), gains.end());
    std::size_t total = 1;
    for (const auto& c : constellations) {
        joint.orders_.push_back(c.order());
        require(total <= std::numeric_limits<std::uint32_t>::max() / c.order(),
                "joint constellation too large");
        total *= c.order();
    }

    const std::size_t k_users = constellations.size();
    joint.points_.resize(total);
    joint.demap_.resize(total * k_users);
    std::vector<std::uint32_t> digits(k_users, 0);
    for (std::size_t p = 0; p < total; ++p) {
        Complex sum{0.0, 0.0};
        for (std::size_t k = 0; k < k_users; ++k) {
            sum += gains[k] * constellations[k].symbol(digits[k]);
            joint.demap_[p * k_users + k] = digits[k];
        }
        joint.points_[p] = sum;
        // Odometer increment, last user fastest.
        for (std::size_t k = k_users; k-- > 0;) {
            if (++digits[k] < constellations[k].order()) break;
            digits[k] = 0;
        }
    }
    const double d = closest_pair_distance(joint.points_);
    joint.min_distance_ = std::isfinite(d) ? d : 0.0;
    return joint;
}

std::optional<Collision> validate_unique(const JointConstellation& joint, double tol) {
    require(tol >= 0.0, "tolerance must be non-negative");
    const auto& pts = joint.points();
    const auto order = order_by_real(pts);
    std::optional<std::pair<std::size_t, std::size_t>> first;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            if (pts[order[j]].real() - pts[order[i]].real() > tol) break;
            if (std::abs(pts[order[i]] - pts[order[j]]) > tol) continue;
            const std::pair<std::size_t, std::size_t> pair{std::min(order[i], order[j]),
                                                           std::max(order[i], order[j])};
            if (!first || pair < *first) first = pair;
        }
    }
    if (!first) return std::nullopt;
    Collision c;
    c.point_a = first->first;
    c.point_b = first->second;
    auto ta = joint.tuple(c.point_a);
    auto tb = joint.tuple(c.point_b);
    c.tuple_a.assign(ta.begin(), ta.end());
    c.tuple_b.assign(tb.begin(), tb.end());
    c.distance = std::abs(pts[c.point_a] - pts[c.point_b]);
    return c;
}

DistanceResult min_distance(const JointConstellation& joint, double tol) {
    if (joint.size() < 2) return {0.0, true};
    if (joint.min_distance() <= tol) return {0.0, false};
    return {joint.min_distance(), true};
}

double papr(const JointConstellation& joint) {
    require(joint.size() > 0, "joint constellation is empty");
    double peak = 0.0;
    double mean = 0.0;
    for (const auto& p : joint.points()) {
        const double e = std::norm(p);
        peak = std::max(peak, e);
        mean += e;
    }
    mean /= static_cast<double>(joint.size());
    require(mean > 0.0, "joint constellation has zero mean power");
    return peak / mean;
}

double papr_db(const JointConstellation& joint) { return 10.0 * std::log10(papr(joint)); }

DesignReport make_report(std::vector<IndividualConstellation> constellations,
                         std::span<const double> gains, Criterion criterion) {
    DesignReport r{.constellations = std::move(constellations),
                   .joint = {},
                   .unique = false,
                   .min_distance = 0.0,
                   .papr = 0.0,
                   .criterion = criterion,
                   .collision = std::nullopt};
    r.joint = build_joint(r.constellations, gains);
    r.collision = validate_unique(r.joint);
    r.unique = !r.collision.has_value();
    r.min_distance = min_distance(r.joint).value;
    r.papr = papr(r.joint);
    return r;
}

// ---------------------------------------------------------------------------
// Design routines

std::vector<IndividualConstellation> design_uep(int users, std::size_t order,
                                                std::span<const double> gammas,
                                                std::span<const double> offsets) {
    require(users >= 1, "user count must be >= 1");
    require(order >= 2 && is_power_of_two(order), "order must be a power of two >= 2");
    require(gammas.size() == static_cast<std::size_t>(users), "one gamma per user is required");
    require(offsets.size() == static_cast<std::size_t>(users), "one offset per user is required");

    const double base = kTwoPi / static_cast<double>(order);
    std::vector<IndividualConstellation> out;
    out.reserve(static_cast<std::size_t>(users));
    for (int k = 0; k < users; ++k) {
        const double gamma = gammas[static_cast<std::size_t>(k)];
        require(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
        const double offset = offsets[static_cast<std::size_t>(k)];
        require(std::isfinite(offset), "offset is not finite");
        std::vector<double> phases(order);
        for (std::size_t m = 0; m < order; ++m)
            phases[m] = offset + static_cast<double>(m) * gamma * base;
        out.emplace_back(k, std::move(phases));
    }
    return out;
}

std::vector<IndividualConstellation> design_eep(int users, std::size_t order) {
    require(users >= 1, "user count must be >= 1");
    require(order >= 2 && is_power_of_two(order), "order must be a power of two >= 2");
    const double base = kTwoPi / static_cast<double>(order);
    std::vector<double> gammas(static_cast<std::size_t>(users), 1.0);
    std::vector<double> offsets(static_cast<std::size_t>(users));
    for (int k = 0; k < users; ++k)
        offsets[static_cast<std::size_t>(k)] = static_cast<double>(k) * base / users;

    auto cs = design_uep(users, order, gammas, offsets);
    const std::vector<double> unit(cs.size(), 1.0);
    const auto joint = build_joint(cs, unit);
    if (auto c = validate_unique(joint)) {
        throw CollisionError("collision: EEP(" + std::to_string(users) + ", " +
                                 std::to_string(order) + ") joint symbols " +
                                 format_tuple(c->tuple_a) + " and " + format_tuple(c->tuple_b) +
                                 " coincide",
                             *c);
    }
    return cs;
}

OffsetSearchResult optimize_offsets(int users, std::size_t order,
                                    std::span<const double> gammas, double step,
                                    std::span<const double> gains) {
    require(users >= 1, "user count must be >= 1");
    require(order >= 2 && is_power_of_two(order), "order must be a power of two >= 2");
    require(gammas.size() == static_cast<std::size_t>(users), "one gamma per user is required");
    require(gains.empty() || gains.size() == gammas.size(), "one gain per user is required");
    require(std::isfinite(step) && step > 0.0, "grid step must be positive");

    const double span = kTwoPi / static_cast<double>(order);
    const double cells = std::round(span / step);
    require(cells >= 1.0 && std::abs(cells * step - span) <= 1e-9,
            "grid step must divide 2*pi/M evenly");
    const auto per_axis = static_cast<std::size_t>(cells);

    std::vector<double> unit(static_cast<std::size_t>(users), 1.0);
    const std::span<const double> g = gains.empty() ? std::span<const double>(unit) : gains;

    std::vector<std::size_t> digits(static_cast<std::size_t>(users), 0);
    std::vector<double> offsets(static_cast<std::size_t>(users), 0.0);
    std::optional<OffsetSearchResult> best;
    // Odometer over offsets[1..K-1], last user fastest: lexicographic order.
    while (true) {
        for (std::size_t k = 1; k < offsets.size(); ++k)
            offsets[k] = static_cast<double>(digits[k]) * step;
        const auto cs = design_uep(users, order, gammas, offsets);
        const auto joint = build_joint(cs, g);
        const auto d = min_distance(joint);
        if (d.valid && (!best || d.value > best->min_distance + kDistanceTolerance))
            best = OffsetSearchResult{offsets, d.value};

        std::size_t k = digits.size();
        while (k-- > 1) {
            if (++digits[k] < per_axis) break;
            digits[k] = 0;
        }
        if (k == 0 || digits.size() == 1) break;
    }
    if (!best) throw DomainError("no injective design found on the offset grid");
    return *best;
}

} // namespace ncma
