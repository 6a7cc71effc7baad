// Concrete syntax: the .spl product-line format and plain IFJ program text.
// print_spl and parse_spl are mutually inverse up to structural equality.
#pragma once

#include <string>

#include "splkit/model.hpp"

namespace splkit {

// Parses a product-line file. Throws ParseError (with 1-based line/column)
// for lexical and grammatical faults and for every validation failure the
// text can exhibit (duplicates, unknown names, order coverage, ...).
ProductLine parse_spl(const std::string& text);

// Deterministic renderer: modules and partitions in stored order, operations
// in their canonical order, formulas fully parenthesized.
std::string print_spl(const ProductLine& pl);

// Standalone IFJ program, as emitted for generated variants.
std::string print_program(const Program& p);

std::string print_formula(const Formula& f);
std::string print_expr(const Expr& e);

// Parses a formula in the constraint grammar against a fixed feature
// universe; used for --keep style CLI arguments.
Formula parse_formula(const std::string& text, const std::vector<std::string>& features);

}  // namespace splkit
