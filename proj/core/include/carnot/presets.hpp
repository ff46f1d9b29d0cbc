#pragma once

#include <string>

#include "carnot/algebra.hpp"

namespace carnot {

StratifiedLieAlgebra make_abelian(int n);
StratifiedLieAlgebra make_heisenberg(int n);
StratifiedLieAlgebra make_engel();

/// Resolve an algebra argument: an existing file path, then a file in
/// $CARNOT_PRESET_DIR, then a built-in preset name (abelian<n>,
/// heisenberg<n>, engel). Throws MalformedSpec when nothing matches.
StratifiedLieAlgebra resolve_algebra(const std::string& spec);

}  // namespace carnot
