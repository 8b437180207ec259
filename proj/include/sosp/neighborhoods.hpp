#pragma once

#include <array>
#include <deque>
#include <optional>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sosp/clustering.hpp"
#include "sosp/model.hpp"

namespace sosp {

/// Selection/success counters and execution probabilities for the two
/// neighborhood structures (index 0: insertion/removal, index 1: migration).
struct NeighborhoodStats {
    std::array<long long, 2> selections{0, 0};
    std::array<long long, 2> successes{0, 0};
    std::array<double, 2> probs{0.5, 0.5};
};

enum class MoveKind { INSERT_REMOVE, MIGRATE };

struct Move {
    MoveKind kind;
    Schedule candidate;
    std::vector<int> removed_task_ids;  // initial tasks evicted from the previous schedule
};

/// FIFO memory of recently evicted tasks, barred from re-insertion while
/// resident. The oldest entry is freed first once the list is full.
class TabuList {
  public:
    explicit TabuList(std::size_t capacity) : capacity_(capacity == 0 ? 1 : capacity) {}

    bool contains(int task_id) const { return lookup_.count(task_id) > 0; }
    std::size_t size() const { return order_.size(); }
    std::size_t capacity() const { return capacity_; }

    void push(int task_id) {
        if (contains(task_id)) return;
        if (order_.size() == capacity_) {
            lookup_.erase(order_.front());
            order_.pop_front();
        }
        order_.push_back(task_id);
        lookup_.insert(task_id);
    }

  private:
    std::size_t capacity_;
    std::deque<int> order_;
    std::unordered_set<int> lookup_;
};

/// Swap neighborhood: insert the heaviest unscheduled, non-tabu task,
/// preferring cluster insertion, then evict whatever the insertion breaks.
/// Returns nullopt when no insertable non-tabu task exists.
std::optional<Move> insertion_removal(const Schedule& schedule, const Instance& instance,
                                      const TabuList& tabu,
                                      std::span<const ResourceWeights> weights, Rng& rng,
                                      bool allow_clustering = true);

/// Migration neighborhood: relocate the scheduled task blocking the most
/// unscheduled tasks to one of its other opportunities, then back-fill the
/// freed capacity with its former conflictors in descending weight.
std::optional<Move> migration(const Schedule& schedule, const Instance& instance,
                              const TabuList& tabu, std::span<const ResourceWeights> weights,
                              Rng& rng, bool allow_clustering = true);

/// Restores feasibility on one orbit after an insertion, never touching the
/// item that contains `protected_member` (pass a negative id to protect
/// nothing). Setup-gap conflicts go first; remaining capacity overruns are
/// resolved by evicting the unit with the lowest weight-per-consumption
/// score. Cluster members may only be peeled from the window endpoints.
/// Appends every evicted initial task to `removed`.
void repair(Schedule& schedule, int orbit_id, int protected_member, const Instance& instance,
            const ResourceWeights& weights, std::vector<int>& removed);

/// Roulette-wheel pick: 1 with probability probs[0], else 2.
int select_structure(const NeighborhoodStats& stats, Rng& rng);

/// Blends each execution probability with its recent success rate, then
/// normalizes and resets the counters. Returns the new probabilities.
std::pair<double, double> update_probabilities(NeighborhoodStats& stats, double eta);

// Shared insertion core: places one given task into the schedule (cluster
// insertion preferred, richest orbit first) and repairs the target orbit.
// Used by both neighborhoods and by the greedy constructors.
std::optional<Move> insert_task(const Schedule& schedule, int task_id, const Instance& instance,
                                std::span<const ResourceWeights> weights, bool allow_clustering,
                                int exclude_orbit = -1);

}  // namespace sosp
