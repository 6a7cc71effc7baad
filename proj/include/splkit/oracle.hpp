// Brute-force correctness oracle: compares two product lines product by
// product, plus a seeded generator of valid, unambiguous, error-free lines
// for fuzzing the refactoring engines.
#pragma once

#include "splkit/model.hpp"

namespace splkit {

// Order-insensitive form of a variant: classes sorted by name, fields before
// methods within a class, each group sorted by name. Bodies untouched.
Program canonicalize(Program p);

struct Witness {
    Product product;
    std::string detail;
};

struct EquivalenceVerdict {
    bool equivalent = false;
    std::vector<Witness> witnesses;   // empty iff equivalent
    std::size_t products_compared = 0;
};

// Product sets must match, and every shared product must yield structurally
// equal canonical variants — or fail with the same error kind on the same
// reference. Witnesses name each offending product.
EquivalenceVerdict check_equivalence(const ProductLine& a, const ProductLine& b);

// Bounds for generate_random_spl. Weights steer the operation mix; a zero
// weight switches the kind off entirely.
struct RandomSplSpec {
    std::uint64_t seed = 0;
    int max_features = 6;
    int max_deltas = 10;
    int max_classes = 5;        // class-name vocabulary
    int max_attrs_per_class = 4;
    int max_ops_per_delta = 3;
    int w_adds_class = 2;
    int w_adds_attr = 4;
    int w_removes = 3;
    int w_modify_plain = 2;
    int w_modify_wrap = 2;
    int w_modify_void = 2;
    int w_modify_extends = 1;
};

// Deterministic in the seed. The result always passes validate() and
// check_unambiguity(), and every product generates without error. The
// corpus additionally stays inside the envelope the refactoring theorems
// cover: each class is introduced at most once, removes targets are pairwise
// incomparable, and no readds are emitted.
ProductLine generate_random_spl(const RandomSplSpec& spec);

}  // namespace splkit
