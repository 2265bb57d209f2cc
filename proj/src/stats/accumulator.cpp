#include "gridsched/stats/accumulator.hpp"

#include <algorithm>
#include <cmath>

#include "gridsched/errors.hpp"

namespace gridsched::stats {

void Accumulator::add(double x) {
    if (count_ == 0) {
        min_ = x;
        max_ = x;
    } else {
        min_ = std::min(min_, x);
        max_ = std::max(max_, x);
    }
    sum_ += x;
    sum_of_squares_ += x * x;
    ++count_;
}

AccumulatorSummary Accumulator::query() const {
    if (count_ == 0) {
        throw EmptyAccumulator("Accumulator::query on empty series");
    }
    AccumulatorSummary s;
    s.count = count_;
    s.sum = sum_;
    s.mean = sum_ / static_cast<double>(count_);
    const double variance = sum_of_squares_ / static_cast<double>(count_) - s.mean * s.mean;
    s.std_dev = std::sqrt(std::max(0.0, variance));
    s.min = min_;
    s.max = max_;
    return s;
}

}  // namespace gridsched::stats
