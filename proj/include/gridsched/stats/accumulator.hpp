#pragma once

#include <cstdint>

namespace gridsched::stats {

struct AccumulatorSummary {
    double mean = 0.0;
    double sum = 0.0;
    double std_dev = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::uint64_t count = 0;
};

// Single-pass moment accumulator for a series of values.
class Accumulator {
public:
    void add(double x);
    std::uint64_t count() const { return count_; }

    // Throws EmptyAccumulator when nothing has been added.
    AccumulatorSummary query() const;

private:
    std::uint64_t count_ = 0;
    double sum_ = 0.0;
    double sum_of_squares_ = 0.0;
    double min_ = 0.0;
    double max_ = 0.0;
};

}  // namespace gridsched::stats
