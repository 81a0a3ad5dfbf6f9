#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncma/error.hpp"

namespace ncma {

using Complex = std::complex<double>;

inline constexpr double kDistanceTolerance = 1e-9;
inline constexpr double kPhaseTolerance = 1e-9;

bool is_power_of_two(std::size_t n);
int log2_exact(std::size_t n);

// Wraps an angle into [0, 2*pi).
double wrap_phase(double radians);

// Angular separation on the circle, in [0, pi].
double circular_distance(double a, double b);

/// One user's unit-circle symbol set.
///
/// Phases are kept in symbol-index order. Bit labels form a reflected Gray
/// code over the phases sorted by angle, so neighbours on the circle
/// (including the wrap from the largest angle back to the smallest) differ
/// in exactly one bit.
class IndividualConstellation {
public:
    // Labels are assigned as Gray code over sorted phases.
    IndividualConstellation(int user_id, std::vector<double> phases);

    // Explicit labels, e.g. read back from a catalog. Rejected unless they
    // form a bijection with the Gray neighbour property.
    IndividualConstellation(int user_id, std::vector<double> phases,
                            std::vector<std::uint32_t> labels);

    int user_id() const { return user_id_; }
    std::size_t order() const { return phases_.size(); }
    int bits_per_symbol() const { return bits_; }
    double amplitude() const { return 1.0; }

    const std::vector<double>& phases() const { return phases_; }
    double phase(std::size_t index) const { return phases_.at(index); }
    Complex symbol(std::size_t index) const;

    const std::vector<std::uint32_t>& labels() const { return labels_; }
    std::uint32_t label(std::size_t index) const { return labels_.at(index); }
    std::size_t index_of_label(std::uint32_t label) const { return label_to_index_.at(label); }

    // Label of `index` as a '0'/'1' string, most significant bit first.
    std::string bit_string(std::size_t index) const;

    // Symbol indices ordered by increasing phase.
    std::vector<std::size_t> sorted_indices() const;

    // Smallest chord length between two of this user's symbols.
    double min_chord_distance() const;

private:
    void validate_phases();
    void index_labels();

    int user_id_;
    int bits_;
    std::vector<double> phases_;
    std::vector<std::uint32_t> labels_;
    std::vector<std::size_t> label_to_index_;
};

struct Collision {
    std::vector<std::uint32_t> tuple_a;
    std::vector<std::uint32_t> tuple_b;
    std::size_t point_a = 0;
    std::size_t point_b = 0;
    double distance = 0.0;
};

std::string format_tuple(std::span<const std::uint32_t> tuple);

// Thrown by design routines whose output would not be separable at the
// receiver.
class CollisionError : public DomainError {
public:
    CollisionError(const std::string& what, Collision witness)
        : DomainError(what), witness_(std::move(witness)) {}
    const Collision& witness() const { return witness_; }

private:
    Collision witness_;
};

/// Additive superposition of one symbol per user.
///
/// Points are enumerated in lexicographic tuple order with user 0 as the
/// most significant digit, so point p decodes to a mixed-radix tuple.
class JointConstellation {
public:
    std::size_t size() const { return points_.size(); }
    std::size_t users() const { return orders_.size(); }

    const std::vector<Complex>& points() const { return points_; }
    const Complex& point(std::size_t p) const { return points_.at(p); }

    // Per-user symbol indices of point p.
    std::span<const std::uint32_t> tuple(std::size_t p) const;
    std::size_t index_of(std::span<const std::uint32_t> tuple) const;

    const std::vector<double>& gains() const { return gains_; }
    const std::vector<std::size_t>& orders() const { return orders_; }

    // Exact minimum pairwise distance, computed at construction.
    double min_distance() const { return min_distance_; }

private:
    friend JointConstellation build_joint(std::span<const IndividualConstellation>,
                                          std::span<const double>);

    std::vector<Complex> points_;
    std::vector<std::uint32_t> demap_;  // size() * users(), row per point
    std::vector<double> gains_;
    std::vector<std::size_t> orders_;
    double min_distance_ = 0.0;
};

enum class Criterion { eep, uep };

std::string to_string(Criterion c);
Criterion parse_criterion(const std::string& s);

struct DesignReport {
    std::vector<IndividualConstellation> constellations;
    JointConstellation joint;
    bool unique = false;
    double min_distance = 0.0;
    double papr = 0.0;
    Criterion criterion = Criterion::eep;
    std::optional<Collision> collision;
};

struct DistanceResult {
    double value = 0.0;
    bool valid = false;  // false when the joint has a collision
};

struct OffsetSearchResult {
    std::vector<double> offsets;
    double min_distance = 0.0;
};

// User k gets phases k*(2pi/M)/K + m*2pi/M. Throws CollisionError when the
// unit-gain joint is not injective.
std::vector<IndividualConstellation> design_eep(int users, std::size_t order);

// User k gets phases offsets[k] + m*gammas[k]*2pi/M. The joint is not
// checked here; smaller gamma means tighter spacing and weaker protection.
std::vector<IndividualConstellation> design_uep(int users, std::size_t order,
                                                std::span<const double> gammas,
                                                std::span<const double> offsets);

JointConstellation build_joint(std::span<const IndividualConstellation> constellations,
                               std::span<const double> gains);

// ok iff every pair of joint points is farther apart than tol. On failure the
// returned witness is the lexicographically smallest colliding index pair.
std::optional<Collision> validate_unique(const JointConstellation& joint,
                                         double tol = kDistanceTolerance);

DistanceResult min_distance(const JointConstellation& joint, double tol = kDistanceTolerance);

// Peak over mean of |point|^2, linear.
double papr(const JointConstellation& joint);
double papr_db(const JointConstellation& joint);

DesignReport make_report(std::vector<IndividualConstellation> constellations,
                         std::span<const double> gains, Criterion criterion);

// Grid search over offsets[1..K-1] in [0, 2pi/M) with offsets[0] = 0, using
// design_uep placement. Maximizes joint min distance among injective
// designs; near-ties (within the distance tolerance) go to the
// lexicographically smallest offset vector. Empty gains means unit gains.
OffsetSearchResult optimize_offsets(int users, std::size_t order,
                                    std::span<const double> gammas, double step,
                                    std::span<const double> gains = {});

} // namespace ncma
