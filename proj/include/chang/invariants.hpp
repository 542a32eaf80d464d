#pragma once

#include "chang/complex.hpp"
#include "chang/graded.hpp"
#include "chang/steenrod.hpp"

#include <map>
#include <string>

namespace chang {

GradedGroup integral_homology(const Elementary& e);
GradedGroup integral_homology(const SmashAtom& a);
GradedGroup integral_homology(const Wedge& x);

// Classes are named letter + degree, with a bar on the second class of a repeated degree
// (ū4) and the suffix appended (u4').
SqModule mod2_cohomology(const Elementary& e, const std::string& letter = "u", const std::string& suffix = "");
SqModule mod2_cohomology(const SmashAtom& a);
// Labels are prefixed with the summand index, "0:u3".
SqModule mod2_cohomology(const Wedge& x);

std::map<int, int> poincare_series(const Wedge& x);

}  // namespace chang
