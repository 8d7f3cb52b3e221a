#pragma once

// Simulated crowd workers: Beta-distributed accuracies and stochastic votes.

#include <span>
#include <string>

#include "predsim/rng.hpp"
#include "predsim/types.hpp"

namespace predsim {

struct SampledWorker {
    std::string worker_id;
    double accuracy = 0.5;  // in [0,1]
    std::string scope;      // question this accuracy applies to ("complex", a predicate id, ...)
};

// Expected accuracy of a same-task worker: the arithmetic mean of the mu_j.
double same_task_mean(std::span<const double> mus);

// Expected accuracy on the complex question, shrunk linearly toward chance:
// mu_b = mu_bar - gamma * (mu_bar - 0.5). gamma=0 leaves the mean untouched,
// gamma=1 pins it to 0.5.
double baseline_mean(std::span<const double> mus, double gamma);

// One accuracy draw from Beta(alpha, beta).
double sample_worker_accuracy(double alpha, double beta, RngStream& rng);

// The vote equals the truth with probability = accuracy, flipped otherwise.
// Consumes exactly one uniform draw, so noise is class-symmetric by
// construction: swapping truth 0<->1 under the same stream complements the
// vote stream.
int cast_vote(int truth, double accuracy, RngStream& rng);

}  // namespace predsim
