#include "gridsched/app/random.hpp"

#include "gridsched/errors.hpp"

namespace gridsched::app {

double real_random(double d, double factor_less, double factor_more, double rd) {
    if (!(factor_less >= 0.0 && factor_less <= 1.0)) {
        throw InvalidFactor("real_random: f_L must be in [0, 1]");
    }
    if (!(factor_more >= 0.0 && factor_more <= 1.0)) {
        throw InvalidFactor("real_random: f_M must be in [0, 1]");
    }
    if (!(rd >= 0.0 && rd < 1.0)) {
        throw InvalidFactor("real_random: rd must be in [0, 1)");
    }
    return d * (1.0 - factor_less + (factor_less + factor_more) * rd);
}

void FactorTable::set(const std::string& situation, double factor_less, double factor_more) {
    if (!(factor_less >= 0.0 && factor_less <= 1.0) ||
        !(factor_more >= 0.0 && factor_more <= 1.0)) {
        throw InvalidFactor("FactorTable: factors must be in [0, 1]");
    }
    factors_[situation] = {factor_less, factor_more};
}

double FactorTable::real(const std::string& situation, double d, UniformRng& rng) const {
    const auto it = factors_.find(situation);
    if (it == factors_.end()) {
        return d;
    }
    return real_random(d, it->second.first, it->second.second, rng.next());
}

}  // namespace gridsched::app
