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

#include "covermap/assess.hpp"

#include <cmath>

#include "covermap/errors.hpp"

namespace covermap {

ErrorMatrix error_matrix(std::span<const std::uint8_t> predicted,
                         std::span<const std::uint8_t> reference) {
    if (predicted.size() != reference.size()) {
        throw ValueError("predicted and reference lengths differ");
    }
    if (predicted.empty()) throw ValueError("error_matrix of empty inputs");
    ErrorMatrix m;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const std::uint8_t p = predicted[i];
        const std::uint8_t r = reference[i];
        if (p > 1 || r > 1) throw ValueError("error_matrix input outside {0,1}");
        m.tp += (p == 1 && r == 1);
        m.fp += (p == 1 && r == 0);
        m.fn += (p == 0 && r == 1);
        m.tn += (p == 0 && r == 0);
    }
    return m;
}

StdErrors standard_errors(const ErrorMatrix& m) {
    if (m.total() < 1) throw ValueError("standard_errors of an empty matrix");
    StdErrors out;
    const double n = static_cast<double>(m.total());
    const double acc = static_cast<double>(m.tp + m.tn) / n;
    out.se_accuracy = std::sqrt(acc * (1.0 - acc) / n);

    const double pred_pos = static_cast<double>(m.tp + m.fp);
    if (pred_pos > 0) {
        const double p = static_cast<double>(m.tp) / pred_pos;
        out.se_precision = std::sqrt(p * (1.0 - p) / pred_pos);
    } else {
        out.precision_degenerate = true;
    }

    const double ref_pos = static_cast<double>(m.tp + m.fn);
    if (ref_pos > 0) {
        const double r = static_cast<double>(m.tp) / ref_pos;
        out.se_recall = std::sqrt(r * (1.0 - r) / ref_pos);
    } else {
        out.recall_degenerate = true;
    }
    return out;
}

double f1_stderr(double p, double dp, double r, double dr) {
    if (dp < 0 || dr < 0) throw ValueError("negative standard error");
    const double sum = p + r;
    if (!(sum > 0)) return 0.0;
    return 2.0 * (r * dp + p * dr) / sum + 2.0 * p * r * (dp + dr) / (sum * sum);
}

MetricSet compute_metrics(const ErrorMatrix& m) {
    if (m.total() < 1) throw ValueError("compute_metrics of an empty matrix");
    MetricSet out;
    const double n = static_cast<double>(m.total());
    out.accuracy = static_cast<double>(m.tp + m.tn) / n;

    const double pred_pos = static_cast<double>(m.tp + m.fp);
    const double ref_pos = static_cast<double>(m.tp + m.fn);
    out.precision = pred_pos > 0 ? static_cast<double>(m.tp) / pred_pos : 0.0;
    out.recall = ref_pos > 0 ? static_cast<double>(m.tp) / ref_pos : 0.0;
    const double pr_sum = out.precision + out.recall;
    out.f1 = pr_sum > 0 ? 2.0 * out.precision * out.recall / pr_sum : 0.0;

    const StdErrors se = standard_errors(m);
    out.se_accuracy = se.se_accuracy;
    out.se_precision = se.se_precision;
    out.se_recall = se.se_recall;
    out.precision_degenerate = se.precision_degenerate;
    out.recall_degenerate = se.recall_degenerate;
    out.f1_degenerate = !(pr_sum > 0);
    out.se_f1 = f1_stderr(out.precision, out.se_precision, out.recall, out.se_recall);
    return out;
}

MetricSet aggregate_mean(std::span<const MetricSet> sets) {
    if (sets.empty()) throw ValueError("aggregate_mean of no metric sets");
    MetricSet out;
    out.precision_degenerate = true;
    out.recall_degenerate = true;
    out.f1_degenerate = true;
    double acc2 = 0, prec2 = 0, rec2 = 0, f12 = 0;
    for (const MetricSet& s : sets) {
        out.accuracy += s.accuracy;
        out.precision += s.precision;
        out.recall += s.recall;
        out.f1 += s.f1;
        acc2 += s.se_accuracy * s.se_accuracy;
        prec2 += s.se_precision * s.se_precision;
        rec2 += s.se_recall * s.se_recall;
        f12 += s.se_f1 * s.se_f1;
        out.precision_degenerate &= s.precision_degenerate;
        out.recall_degenerate &= s.recall_degenerate;
        out.f1_degenerate &= s.f1_degenerate;
    }
    const double k = static_cast<double>(sets.size());
    out.accuracy /= k;
    out.precision /= k;
    out.recall /= k;
    out.f1 /= k;
    out.se_accuracy = std::sqrt(acc2) / k;
    out.se_precision = std::sqrt(prec2) / k;
    out.se_recall = std::sqrt(rec2) / k;
    out.se_f1 = std::sqrt(f12) / k;
    return out;
}

Evaluation evaluate_map(const BinaryMask& mask, const ReferenceDataset& ds) {
    mask.grid.validate();
    if (ds.points.empty()) throw ValueError("reference dataset is empty");
    Evaluation ev;
    std::vector<std::uint8_t> predicted;
    std::vector<std::uint8_t> reference;
    predicted.reserve(ds.points.size());
    reference.reserve(ds.points.size());
    for (const LabeledPoint& pt : ds.points) {
        const std::int64_t row = mask.grid.row_of_y(pt.y);
        const std::int64_t col = mask.grid.col_of_x(pt.x);
        std::uint8_t value = mask.nodata;
        if (mask.grid.in_bounds(row, col)) {
            value = mask.at(static_cast<int>(row), static_cast<int>(col));
        }
        if (value == mask.nodata) {
            ++ev.excluded;
            continue;
        }
        predicted.push_back(value);
        reference.push_back(static_cast<std::uint8_t>(pt.label));
    }
    if (predicted.empty()) {
        throw ValueError("all reference points excluded (nodata or outside the mask)");
    }
    ev.scored = predicted.size();
    ev.matrix = error_matrix(predicted, reference);
    ev.metrics = compute_metrics(ev.matrix);
    return ev;
}

} // namespace covermap
