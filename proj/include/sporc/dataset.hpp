#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sporc/errors.hpp"

namespace sporc {

/// One observation: features x, item costs c, and the m constraint
/// parameter rows a (each of length d, matching the decision dimension).
struct ContextSample {
    Eigen::VectorXd x;
    Eigen::VectorXd c;
    std::vector<Eigen::VectorXd> a;
};

struct Dims {
    int n = 0;  ///< samples
    int p = 0;  ///< features
    int d = 0;  ///< decision dimension
    int m = 0;  ///< constraint rows per sample
    bool operator==(const Dims&) const = default;
};

/// A homogeneous collection of samples. Every sample must agree with dims;
/// validate() enforces that and throws DimMismatch otherwise.
struct Dataset {
    std::vector<ContextSample> samples;
    Dims dims;

    int size() const { return static_cast<int>(samples.size()); }
    void validate() const;
    /// Subset by (not necessarily sorted) indices.
    Dataset select(const std::vector<int>& idx) const;
};

/// Fractions for the predictor-fit / calibration / training / target parts.
struct SplitSpec {
    std::array<double, 4> fractions{0.25, 0.25, 0.40, 0.10};
};

struct FourWaySplit {
    std::array<Dataset, 4> parts;
    std::array<std::vector<int>, 4> indices;  ///< positions in the source dataset
};

/// Randomly partitions data into four parts. Part k gets floor(f_k * n)
/// samples; the remainder goes to the training part (index 2). Throws
/// EmptyPart if any part would be empty and ConfigError if the fractions
/// are not positive or do not sum to 1 within 1e-9.
FourWaySplit four_way_split(const Dataset& data, const SplitSpec& spec,
                            std::uint64_t seed);

/// JSON-lines dataset IO. One object per line with keys "x", "c", "a".
/// Values round-trip bit-exactly for finite doubles.
Dataset read_jsonl(const std::string& path);
void write_jsonl(const Dataset& data, const std::string& path);

}  // namespace sporc
