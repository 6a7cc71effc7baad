// Product-line analyses: monotonicity classification, projection onto a
// feature subspace, order linearizations, and empty-module cleanup.
#pragma once

#include "splkit/model.hpp"

namespace splkit {

// Modules in application order: partition index ascending, names ascending
// within a partition.
std::vector<std::string> linearize_up(const ProductLine& pl);
// Reverse partition order, names still ascending within a partition.
std::vector<std::string> linearize_down(const ProductLine& pl);

// One operation that falsifies a monotonicity class.
struct ClassViolation {
    std::string delta;
    Reference ref;
    AdoOp op;
    std::string why;
};

// The nine monotonicity classes. A line with no operations at all is in
// every class. Evidence maps each class slug to the operations violating it
// (empty exactly for the true flags).
struct ClassificationReport {
    bool strictly_increasing = true;
    bool increasing = true;
    bool pseudo_increasing = true;
    bool strictly_decreasing = true;
    bool decreasing = true;
    bool pseudo_decreasing = true;
    bool readd_strictly_decreasing = true;
    bool readd_decreasing = true;
    bool readd_pseudo_decreasing = true;
    std::map<std::string, std::vector<ClassViolation>> evidence;

    bool flag(const std::string& slug) const;
};

// Slugs in report order: strictly-increasing, increasing, pseudo-increasing,
// strictly-decreasing, decreasing, pseudo-decreasing,
// readd-strictly-decreasing, readd-decreasing, readd-pseudo-decreasing.
extern const std::vector<std::string> kClassificationSlugs;

ClassificationReport classify(const ProductLine& pl);

// Restricts the line to products satisfying `keep` (conjoined onto the
// feature-model constraint) and drops modules that can no longer activate.
// Features, base program and surviving modules are untouched. Throws
// UsageError when `keep` mentions an undeclared feature.
ProductLine project(const ProductLine& pl, const Formula& keep);

// Drops modules with no operations (and their activation/order entries);
// variants are unaffected.
ProductLine remove_empty_deltas(const ProductLine& pl);

}  // namespace splkit
