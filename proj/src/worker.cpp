#include "predsim/worker.hpp"

#include <random>

namespace predsim {

double same_task_mean(std::span<const double> mus) {
    if (mus.empty()) throw EmptyInput("same_task_mean needs at least one mean");
    double sum = 0.0;
    for (double mu : mus) sum += mu;
    return sum / static_cast<double>(mus.size());
}

double baseline_mean(std::span<const double> mus, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw DomainError("penalty gamma must lie in [0,1], got " + std::to_string(gamma));
    const double mean = same_task_mean(mus);
    return mean - gamma * (mean - 0.5);
}

double sample_worker_accuracy(double alpha, double beta, RngStream& rng) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw DomainError("beta shape parameters must be positive");
    std::gamma_distribution<double> ga(alpha, 1.0);
    std::gamma_distribution<double> gb(beta, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    if (x + y == 0.0) return alpha / (alpha + beta);
    return x / (x + y);
}

int cast_vote(int truth, double accuracy, RngStream& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const bool correct = unit(rng) < accuracy;
    return correct ? truth : 1 - truth;
}

}  // namespace predsim
