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

#include "covermap/consensus.hpp"

#include <algorithm>
#include <numeric>

#include "covermap/errors.hpp"
#include "covermap/kernels.hpp"
#include "covermap/parallel.hpp"

namespace covermap {

namespace {

// Row band processed per work item; fixed so results cannot depend on the
// thread count.
constexpr std::size_t kChunkPixels = std::size_t(1) << 16;

// Crop-vote counts and the any-mask-nodata flag per pixel.
struct VoteBuffers {
    std::vector<std::uint8_t> votes;
    std::vector<std::uint8_t> invalid;
};

VoteBuffers count_votes(const MaskStack& stack, int threads) {
    const std::size_t n = stack.masks.front().values.size();
    VoteBuffers out;
    out.votes.assign(n, 0);
    out.invalid.assign(n, 0);
    parallel_chunks(n, kChunkPixels, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (const BinaryMask& mask : stack.masks) {
            kernels::accumulate_votes(mask.values.data() + begin, mask.nodata,
                                      out.votes.data() + begin, out.invalid.data() + begin,
                                      end - begin);
        }
    });
    return out;
}

} // namespace

void MaskStack::validate() const {
    if (masks.size() < 2) throw ValueError("mask stack needs at least 2 masks");
    if (masks.size() > 250) throw ValueError("mask stack too deep for 8-bit vote counts");
    if (names.size() != masks.size()) throw ValueError("mask stack names do not match masks");
    const GridSpec& grid = masks.front().grid;
    for (const BinaryMask& mask : masks) {
        if (!(mask.grid == grid)) throw GridMismatchError("mask stack grids differ");
        if (mask.values.size() != grid.cell_count()) {
            throw ValueError("mask buffer does not match its grid");
        }
    }
}

ConsensusRaster vote_count(const MaskStack& stack, int threads) {
    stack.validate();
    VoteBuffers buffers = count_votes(stack, threads);
    ConsensusRaster out;
    out.grid = stack.masks.front().grid;
    out.n_masks = static_cast<int>(stack.size());
    out.votes = std::move(buffers.votes);
    for (std::size_t i = 0; i < out.votes.size(); ++i) {
        if (buffers.invalid[i]) out.votes[i] = out.nodata;
    }
    return out;
}

BinaryMask majority_vote(const MaskStack& stack, int threads) {
    stack.validate();
    const VoteBuffers buffers = count_votes(stack, threads);
    const std::uint32_t n_masks = static_cast<std::uint32_t>(stack.size());
    BinaryMask out;
    out.grid = stack.masks.front().grid;
    out.values.resize(buffers.votes.size());
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        if (buffers.invalid[i]) {
            out.values[i] = out.nodata;
        } else {
            // votes > N/2, exact: an even-N tie fails the strict inequality.
            out.values[i] = static_cast<std::uint8_t>(2u * buffers.votes[i] > n_masks);
        }
    }
    return out;
}

AgreementSummary agreement_summary(const MaskStack& stack, int threads) {
    stack.validate();
    const VoteBuffers buffers = count_votes(stack, threads);
    const std::size_t n = buffers.votes.size();
    const std::uint32_t n_masks = static_cast<std::uint32_t>(stack.size());

    const std::uint64_t valid =
        kernels::count_eq(buffers.invalid.data(), 0, n);
    if (valid == 0) throw ValueError("no valid pixels across the stack");

    const std::uint64_t all_crop = kernels::count_eq_valid(
        buffers.votes.data(), buffers.invalid.data(), static_cast<std::uint8_t>(n_masks), n);
    const std::uint64_t none_crop =
        kernels::count_eq_valid(buffers.votes.data(), buffers.invalid.data(), 0, n);

    std::uint64_t split = 0;
    if (n_masks % 2 == 0) {
        split = kernels::count_eq_valid(buffers.votes.data(), buffers.invalid.data(),
                                        static_cast<std::uint8_t>(n_masks / 2), n);
    } else {
        split = kernels::count_eq_valid(buffers.votes.data(), buffers.invalid.data(),
                                        static_cast<std::uint8_t>((n_masks - 1) / 2), n) +
                kernels::count_eq_valid(buffers.votes.data(), buffers.invalid.data(),
                                        static_cast<std::uint8_t>((n_masks + 1) / 2), n);
    }

    AgreementSummary out;
    out.valid_pixel_count = valid;
    const double denom = static_cast<double>(valid);
    out.pct_all_crop = 100.0 * static_cast<double>(all_crop) / denom;
    out.pct_none_crop = 100.0 * static_cast<double>(none_crop) / denom;
    out.pct_all_same = 100.0 * static_cast<double>(all_crop + none_crop) / denom;
    out.pct_split = 100.0 * static_cast<double>(split) / denom;
    return out;
}

AgreementMatrix pairwise_agreement(const MaskStack& stack, int threads) {
    stack.validate();
    const VoteBuffers buffers = count_votes(stack, threads);
    const std::size_t n = buffers.invalid.size();
    const std::size_t n_masks = stack.size();

    AgreementMatrix out;
    out.names = stack.names;
    out.values.assign(n_masks * n_masks, 0.0);

    // All pairs share one valid set, so each entry uses the same denominator.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n_masks; ++i) {
        for (std::size_t j = i + 1; j < n_masks; ++j) pairs.emplace_back(i, j);
    }
    std::vector<kernels::PairCounts> counts(pairs.size());
    parallel_chunks(pairs.size(), 1, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const auto [i, j] = pairs[k];
            counts[k] = kernels::pair_agreement(stack.masks[i].values.data(),
                                                stack.masks[j].values.data(),
                                                buffers.invalid.data(), n);
        }
    });
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (counts[k].valid == 0) throw ValueError("no valid pixels across the stack");
        const double f = static_cast<double>(counts[k].agree) / static_cast<double>(counts[k].valid);
        const auto [i, j] = pairs[k];
        out.at(i, j) = f;
        out.at(j, i) = f;
    }
    return out;
}

std::pair<AgreementMatrix, std::vector<int>> mean_and_rank(
    std::span<const AgreementMatrix> matrices) {
    if (matrices.empty()) throw ValueError("mean_and_rank of no matrices");
    const AgreementMatrix& first = matrices.front();
    const std::size_t n = first.size();
    for (const AgreementMatrix& m : matrices) {
        if (m.size() != n || m.names != first.names) {
            throw ValueError("agreement matrices differ in dimension or name order");
        }
    }

    AgreementMatrix mean;
    mean.names = first.names;
    mean.values.assign(n * n, 0.0);
    for (const AgreementMatrix& m : matrices) {
        for (std::size_t i = 0; i < m.values.size(); ++i) mean.values[i] += m.values[i];
    }
    const double k = static_cast<double>(matrices.size());
    for (double& v : mean.values) v /= k;
    for (std::size_t i = 0; i < n; ++i) mean.at(i, i) = 0.0;

    // Competition ranks within each row, off-diagonal entries only:
    // rank = 1 + count of strictly smaller entries, so ties share the lower
    // rank. Diagonal stays 0.
    std::vector<int> ranks(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            int below = 0;
            for (std::size_t m = 0; m < n; ++m) {
                if (m == i || m == j) continue;
                below += (mean.at(i, m) < mean.at(i, j));
            }
            ranks[i * n + j] = 1 + below;
        }
    }
    return {std::move(mean), std::move(ranks)};
}

} // namespace covermap
