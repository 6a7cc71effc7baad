// Monotonicity refactorings: rewrite a product line into an equivalent one
// whose modules only grow programs (increasing) or only shrink them
// (decreasing, up to readds). Both preserve the set of products and every
// variant; payloads are moved, never duplicated.
#pragma once

#include "splkit/model.hpp"

namespace splkit {

// Allocates delta-module names that are new to the line: the requested stem,
// or stem_2, stem_3, ... on collision.
class FreshNamer {
  public:
    explicit FreshNamer(const ProductLine& pl);
    std::string fresh(const std::string& stem);

  private:
    std::set<std::string> used_;
};

// Eliminates every removes operation. A removed element's earlier
// introductions move into fresh modules activated only while the remover is
// not; an element the base program owns moves into a fresh DNot<remover>
// module ordered before the moved introductions. Output classifies as
// increasing (strictly so when the input had no modifies).
ProductLine refactor_increasing(const ProductLine& pl);

// Eliminates every adds operation by completing the base program. Removes
// operations that earlier modules aimed at the added elements move into
// fresh modules; elements the base already owned become readds modules
// active with the original adder; elements newly merged into the base gain
// remove modules active while the adder is not. Output contains no adds.
ProductLine refactor_decreasing(const ProductLine& pl);

}  // namespace splkit
