#pragma once

#include "pcc/nn/tensor.hpp"
#include "pcc/random.hpp"

namespace pcc::nn {

/// He/Kaiming uniform: U(-b, b) with b = sqrt(6 / fan_in).
void kaiming_uniform(Tensor& weights, std::size_t fan_in, Rng& rng);

}  // namespace pcc::nn
