#pragma once

#include <string>

#include "tdisp/witt.hpp"

namespace tdisp::cli {

/// Evaluates a Witt vector expression over the ring R.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary ('*' unary)*
///   unary   := '-' unary | primary
///   primary := w[a0,...] | integer | f(expr) | v(expr) | f1(expr)
///            | teich(ring element) | '(' expr ')'
///
/// A literal fixes its level (its number of coordinates); v raises the
/// level by one and f1 lowers it. Integers and teich() adapt to the level
/// of the other operands; when nothing fixes the level, default_level is
/// used. Throws ParseError on syntax errors and PreconditionError on level
/// mismatches or f1 outside the ideal.
std::string evaluate_witt_expression(const std::string& text, const RingPtr& R, int default_level);

}  // namespace tdisp::cli
