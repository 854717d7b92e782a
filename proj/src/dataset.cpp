#include "sporc/dataset.hpp"

#include <cmath>
#include <numeric>

#include "sporc/rng.hpp"

namespace sporc {

void Dataset::validate() const {
    if (static_cast<int>(samples.size()) != dims.n)
        throw DimMismatch("dataset: sample count " + std::to_string(samples.size()) +
                          " does not match dims.n " + std::to_string(dims.n));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (s.x.size() != dims.p)
            throw DimMismatch("dataset: sample " + std::to_string(i) + " has " +
                              std::to_string(s.x.size()) + " features, expected " +
                              std::to_string(dims.p));
        if (s.c.size() != dims.d)
            throw DimMismatch("dataset: sample " + std::to_string(i) + " has " +
                              std::to_string(s.c.size()) + " costs, expected " +
                              std::to_string(dims.d));
        if (static_cast<int>(s.a.size()) != dims.m)
            throw DimMismatch("dataset: sample " + std::to_string(i) + " has " +
                              std::to_string(s.a.size()) + " constraint rows, expected " +
                              std::to_string(dims.m));
        for (const auto& row : s.a)
            if (row.size() != dims.d)
                throw DimMismatch("dataset: sample " + std::to_string(i) +
                                  " has a constraint row of length " +
                                  std::to_string(row.size()) + ", expected " +
                                  std::to_string(dims.d));
    }
}

Dataset Dataset::select(const std::vector<int>& idx) const {
    Dataset out;
    out.dims = dims;
    out.dims.n = static_cast<int>(idx.size());
    out.samples.reserve(idx.size());
    for (int i : idx) out.samples.push_back(samples.at(static_cast<std::size_t>(i)));
    return out;
}

FourWaySplit four_way_split(const Dataset& data, const SplitSpec& spec,
                            std::uint64_t seed) {
    double sum = 0.0;
    for (double f : spec.fractions) {
        if (f <= 0.0) throw ConfigError("split: fractions must be positive");
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("split: fractions must sum to 1, got " + std::to_string(sum));

    const int n = data.size();
    std::array<int, 4> sizes{};
    int assigned = 0;
    for (int k = 0; k < 4; ++k) {
        sizes[k] = static_cast<int>(std::floor(spec.fractions[k] * n));
        assigned += sizes[k];
    }
    sizes[2] += n - assigned;  // remainder joins the training part
    for (int k = 0; k < 4; ++k)
        if (sizes[k] <= 0)
            throw EmptyPart("split: part " + std::to_string(k) + " would be empty (n=" +
                            std::to_string(n) + ")");

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    FourWaySplit out;
    int pos = 0;
    for (int k = 0; k < 4; ++k) {
        out.indices[k].assign(order.begin() + pos, order.begin() + pos + sizes[k]);
        out.parts[k] = data.select(out.indices[k]);
        pos += sizes[k];
    }
    return out;
}

}  // namespace sporc
