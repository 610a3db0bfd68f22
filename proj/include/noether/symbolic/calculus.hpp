#pragma once

#include <functional>
#include <optional>

#include "noether/symbolic/expression.hpp"

namespace noether::sym {

// Exact partial derivative with respect to a symbol. Velocities are
// independent symbols; unknown functions gain a derivative index, or vanish
// when they do not depend on the variable.
[[nodiscard]] Expr differentiate(const Expr& e, Symbol v);

// Replace every unknown function named `name` by `replacement` (an expression
// in the same arguments), differentiating it per the node's multi-index.
[[nodiscard]] Expr substitute_unknown(const Expr& e, UnknownName name, const Expr& replacement);

// Replace unknown-function nodes (derivative nodes included) for which
// `replace` returns a value; other nodes are kept.
using UnknownReplacer = std::function<std::optional<Expr>(const UnknownFunction&)>;
[[nodiscard]] Expr replace_unknowns(const Expr& e, const UnknownReplacer& replace);

}  // namespace noether::sym
