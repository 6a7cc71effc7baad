// Variant generation: products of the feature model, delta activation and
// application, and the strong-unambiguity check that makes application order
// within a partition irrelevant.
#pragma once

#include "splkit/model.hpp"

namespace splkit {

// All feature selections satisfying the feature-model constraint, in
// lexicographic order of their sorted feature names.
std::vector<Product> enumerate_products(const ProductLine& pl);

// Names of the modules activated by `product`, linearized (partition order,
// names ascending within a partition). Throws UsageError unless `product` is
// a valid product of the line.
std::vector<std::string> activated_deltas(const ProductLine& pl, const Product& product);

// Applies one delta operation.
//   adds class      appends the declaration (class must not exist; the new
//                   extends edge must not close a cycle)
//   adds attribute  inserts into an existing class (attribute must not exist)
//   removes         deletes the class/attribute when present, else a no-op;
//                   removing a method also drops its original-call copies
//   modifies method replaces the body, resolving original-calls through a
//                   copy of the previous method under m$orig$k
//   modifies extends  retargets the superclass (no cycle may form)
//   readds attribute  replaces the attribute, or plain-adds it when absent;
//                     the enclosing class must exist
// Throws ApplyError naming the offending reference.
Program apply_ado(const Ado& ado, Program prog);

// Applies every operation of one module. Within the module: class removes,
// then class adds, then attribute-level operations, each group in stored
// reference order.
Program apply_module(const DeltaModule& d, Program prog);

// Folds the activated modules over the base program. ApplyErrors are
// re-thrown tagged with the delta name and the product.
Program generate_variant(const ProductLine& pl, const Product& product);

struct AmbiguityFinding {
    std::size_t partition;  // index into pl.order
    std::string d1, d2;     // module pair, d1 < d2
    Reference r1, r2;       // overlapping references (one is a prefix of the other)
};

struct UnambiguityReport {
    std::vector<AmbiguityFinding> findings;
    bool ok() const { return findings.empty(); }
};

// Strong unambiguity: within each partition, any two modules that some valid
// product activates together must touch pairwise incomparable references.
UnambiguityReport check_unambiguity(const ProductLine& pl);

}  // namespace splkit
