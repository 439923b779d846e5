#pragma once

#include "hadm/cyclo.hpp"
#include "hadm/defect.hpp"
#include "hadm/fourier_tangent.hpp"
#include "hadm/io.hpp"
#include "hadm/linalg.hpp"
#include "hadm/matrix.hpp"
#include "hadm/numtheory.hpp"
#include "hadm/regularity.hpp"
#include "hadm/spectrum.hpp"
#include "hadm/tangent.hpp"
