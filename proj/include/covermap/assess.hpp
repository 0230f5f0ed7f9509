// Copyright 2026 The covermap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>

#include "covermap/grid.hpp"
#include "covermap/reference.hpp"

namespace covermap {

// Binary confusion counts; the positive class is crop = 1.
struct ErrorMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fp + fn + tn; }
};

// Accuracy, precision (user's accuracy), recall (producer's accuracy), and F1
// with standard errors. The degenerate flags mark metrics whose denominator
// was zero and were therefore reported as 0 by convention.
struct MetricSet {
    double accuracy = 0;
    double precision = 0;
    double recall = 0;
    double f1 = 0;
    double se_accuracy = 0;
    double se_precision = 0;
    double se_recall = 0;
    double se_f1 = 0;
    bool precision_degenerate = false;
    bool recall_degenerate = false;
    bool f1_degenerate = false;
};

// Tallies the four (predicted, reference) combinations. Inputs must be equal
// length, non-empty, and already filtered of nodata predictions.
ErrorMatrix error_matrix(std::span<const std::uint8_t> predicted,
                         std::span<const std::uint8_t> reference);

// Standard errors for accuracy, precision, and recall under simple random
// sampling: the binomial form sqrt(m (1 - m) / d) with d the metric's own
// denominator. A zero denominator gives se = 0 and sets the degenerate flag.
struct StdErrors {
    double se_accuracy = 0;
    double se_precision = 0;
    double se_recall = 0;
    bool precision_degenerate = false;
    bool recall_degenerate = false;
};

StdErrors standard_errors(const ErrorMatrix& m);

// Error propagated from precision and recall into F1:
//   dF1 = 2 (R dP + P dR) / (P + R) + 2 P R (dP + dR) / (P + R)^2
// Returns 0 when p + r == 0 (degenerate).
double f1_stderr(double p, double dp, double r, double dr);

// All four metrics plus standard errors for one confusion matrix.
MetricSet compute_metrics(const ErrorMatrix& m);

// Arithmetic mean of each metric; each standard error combines as
// sqrt(sum se_i^2) / k (uncorrelated propagation). A flag is set iff it is
// set in every input.
MetricSet aggregate_mean(std::span<const MetricSet> sets);

struct Evaluation {
    MetricSet metrics;
    ErrorMatrix matrix;
    std::size_t scored = 0;   // points that landed on valid pixels
    std::size_t excluded = 0; // points on nodata or outside the extent
};

// Scores a mask against a reference dataset. Points on nodata pixels (or
// outside the mask) are excluded and counted; throws when nothing remains.
Evaluation evaluate_map(const BinaryMask& mask, const ReferenceDataset& ds);

} // namespace covermap
