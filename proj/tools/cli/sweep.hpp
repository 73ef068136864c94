#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cli/csv.hpp"

namespace decoh::cli {

enum class SweepScale { linear, log };

struct SweepSpec {
    std::string parameter; // lambda | k_sigma | delta | w | T
    double start = 0.0;
    double stop = 0.0;
    int points = 0;
    SweepScale scale = SweepScale::linear;

    /// Throws decoh::DomainError for an unusable spec.
    void validate() const;
    std::vector<double> values() const;
};

bool is_sweep_parameter(const std::string& name);

/// Worker count: DECOH_NUM_THREADS when set to a positive integer, otherwise
/// the hardware concurrency.
unsigned sweep_threads();

/// Evaluates `row(i)` for i in [0, n) on up to `threads` workers; rows come
/// back in index order regardless of scheduling.
std::vector<std::vector<Cell>> parallel_rows(std::size_t n, unsigned threads,
                                             const std::function<std::vector<Cell>(std::size_t)>& row);

} // namespace decoh::cli
