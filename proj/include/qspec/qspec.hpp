#pragma once

#include "qspec/cd_kernel.hpp"
#include "qspec/cd_zeros.hpp"
#include "qspec/errors.hpp"
#include "qspec/hermite.hpp"
#include "qspec/io.hpp"
#include "qspec/pseudo_eigen.hpp"
#include "qspec/quadrature_operator.hpp"
#include "qspec/scaled_real.hpp"
#include "qspec/spectral_limit.hpp"
