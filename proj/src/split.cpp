#include <cmath>

#include "facet/data_model.hpp"
#include "facet/error.hpp"
#include "facet/rng.hpp"

namespace facet {

void validate_fractions(const SplitFractions& f) {
    if (!(f.train > 0.0) || !(f.validation > 0.0) || !(f.test > 0.0)) {
        throw Error(ErrorKind::Config, "split fractions must all be positive");
    }
    if (std::abs(f.train + f.validation + f.test - 1.0) > 1e-12) {
        throw Error(ErrorKind::Config, "split fractions must sum to 1");
    }
}

SplitSizes split_sizes(std::size_t n, const SplitFractions& fractions) {
    validate_fractions(fractions);
    if (n < 5) {
        throw Error(ErrorKind::Size, "need at least 5 faces to split, got " + std::to_string(n));
    }
    const auto part = [n](double f) {
        return static_cast<std::size_t>(std::llround(static_cast<double>(n) * f));
    };
    SplitSizes sizes;
    sizes.validation = part(fractions.validation);
    sizes.test = part(fractions.test);
    if (sizes.validation == 0 || sizes.test == 0 || sizes.validation + sizes.test >= n) {
        throw Error(ErrorKind::Size, std::to_string(n) + " faces cannot give every partition a member");
    }
    sizes.train = n - sizes.validation - sizes.test;
    return sizes;
}

Split make_split(std::span<const FaceId> faces, const SplitSpec& spec) {
    const SplitSizes sizes = split_sizes(faces.size(), spec.fractions);
    std::vector<FaceId> order(faces.begin(), faces.end());
    SplitMix64 rng(combine_seed(spec.seed, spec.repeat_index));
    shuffle(std::span<FaceId>(order), rng);

    Split split;
    const auto first = order.begin();
    const auto val_begin = first + static_cast<std::ptrdiff_t>(sizes.train);
    const auto test_begin = val_begin + static_cast<std::ptrdiff_t>(sizes.validation);
    split.train.assign(first, val_begin);
    split.validation.assign(val_begin, test_begin);
    split.test.assign(test_begin, order.end());
    return split;
}

}  // namespace facet
