#ifndef ELLFM_HPP
#define ELLFM_HPP

#include "ellfm/closed_forms.hpp"
#include "ellfm/errors.hpp"
#include "ellfm/io.hpp"
#include "ellfm/labels.hpp"
#include "ellfm/lattice.hpp"
#include "ellfm/lattice_spec.hpp"
#include "ellfm/rmatrix.hpp"
#include "ellfm/theta.hpp"
#include "ellfm/verify.hpp"
#include "ellfm/weights.hpp"

#endif
