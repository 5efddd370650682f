#ifndef SMALLPOLY_SMALLPOLY_HPP
#define SMALLPOLY_SMALLPOLY_HPP

#include "certify.hpp"
#include "constructions.hpp"
#include "diamgraph.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "optimizer.hpp"
#include "svg.hpp"

#endif // SMALLPOLY_SMALLPOLY_HPP
