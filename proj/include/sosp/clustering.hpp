#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "sosp/model.hpp"

namespace sosp {

/// Floor applied to the resource weights so the worthiness test stays
/// meaningful while nothing has been consumed yet.
inline constexpr double kWeightFloor = 0.01;

/// Relative importance of energy vs memory on one orbit, tracking how much
/// of each capacity the current schedule already consumes.
struct ResourceWeights {
    double alpha = kWeightFloor;  // energy weight
    double beta = kWeightFloor;   // memory weight
};

ResourceWeights resource_weights(double consumed_energy, double energy_capacity,
                                 double consumed_memory, double memory_capacity);

/// Weights for every orbit, derived from the schedule's current usage.
std::vector<ResourceWeights> resource_weights_per_orbit(const Schedule& schedule,
                                                        const Instance& instance);

/// Resource cost of finishing two observations separately vs merged.
struct ClusterCost {
    double separate_energy = 0.0;
    double separate_memory = 0.0;
    double clustered_energy = 0.0;
    double clustered_memory = 0.0;
};

/// Componentwise intersection of angle ranges. Returns nullopt when the
/// ranges do not overlap (width below 1e-9 counts as empty). Throws
/// ArgumentError on an empty input list.
std::optional<AngleRange> intersect_ranges(std::span<const AngleRange> ranges);

/// Envelope of the given windows: [min start, max end]. Throws
/// ArgumentError on an empty input list.
TimeWindow merge_windows(std::span<const TimeWindow> windows);

ClusterCost resource_delta(const TimeWindow& window_a, double angle_a,
                           const TimeWindow& window_b, double angle_b,
                           const TimeWindow& merged, double merged_angle, const Orbit& orbit);

/// Strict weighted comparison: merging must consume fewer resources than
/// running the two observations separately.
bool worthwhile(const ClusterCost& cost, const ResourceWeights& weights);

enum class ClusterReject {
    ANGLE,     // member angle ranges do not intersect
    DURATION,  // merged window longer than the continuous-observation cap
    WORTH,     // merging would consume more weighted resources
};

struct ClusterOutcome {
    std::optional<ScheduledItem> item;  // set on success
    ClusterReject reason = ClusterReject::ANGLE;

    bool ok() const { return item.has_value(); }
};

/// Attempts to absorb an opportunity into an existing item on the same
/// orbit. On success the returned item has the intersected angle range,
/// midpoint pointing angle, merged window and summed weight. Throws
/// ArgumentError if the opportunity is on a different orbit or its task is
/// already a member.
ClusterOutcome try_cluster(const ScheduledItem& item, const Opportunity& opp,
                           const Instance& instance, const ResourceWeights& weights);

}  // namespace sosp
