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
#include <string>
#include <utility>
#include <vector>

#include "covermap/grid.hpp"

namespace covermap {

// Ordered set of co-registered masks; the name order fixes matrix rows and
// columns (finest-to-coarsest resolution by convention).
struct MaskStack {
    std::vector<BinaryMask> masks;
    std::vector<std::string> names;

    std::size_t size() const { return masks.size(); }
    // Requires N >= 2, matching names, identical grids.
    void validate() const;
};

// Per-pixel count of crop votes; nodata wherever any member mask is nodata.
struct ConsensusRaster {
    GridSpec grid;
    std::vector<std::uint8_t> votes;
    std::uint8_t nodata = 255;
    int n_masks = 0;
};

// Agreement percentages over valid pixels (pixels where no mask is nodata).
struct AgreementSummary {
    double pct_all_same = 0;
    double pct_all_crop = 0;
    double pct_split = 0;
    double pct_none_crop = 0;
    std::uint64_t valid_pixel_count = 0;
};

// Symmetric N x N agreement fractions with the diagonal fixed at 0.
struct AgreementMatrix {
    std::vector<std::string> names;
    std::vector<double> values; // row-major N x N

    std::size_t size() const { return names.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * names.size() + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * names.size() + j]; }
};

ConsensusRaster vote_count(const MaskStack& stack, int threads = 1);

// Pixel = 1 iff more than half the masks vote crop; an exact N/2 tie (even N)
// is non-crop. Nodata propagates from any member.
BinaryMask majority_vote(const MaskStack& stack, int threads = 1);

// Vote-count histogram statistics over valid pixels. The split set is the one
// or two counts nearest N/2: {(N-1)/2, (N+1)/2} for odd N, {N/2} for even N.
AgreementSummary agreement_summary(const MaskStack& stack, int threads = 1);

// Entry (i, j) = fraction of valid pixels where mask_i == mask_j; diagonal 0.
AgreementMatrix pairwise_agreement(const MaskStack& stack, int threads = 1);

// Elementwise mean of per-country matrices, plus within-row competition ranks
// of the mean's off-diagonal entries (1 = lowest agreement; ties share the
// lower rank; diagonal 0).
std::pair<AgreementMatrix, std::vector<int>> mean_and_rank(
    std::span<const AgreementMatrix> matrices);

} // namespace covermap
