#pragma once

#include "tensorial/body.hpp"

namespace tensorial {

inline constexpr int kMaxFactors = 3;
inline constexpr int kMaxProductDim = 16;

/// Shape (d_1, ..., d_l) read off the factor dimensions.
TensorShape shape_of(const std::vector<Body>& factors);

/// conv{x_1 (x) ... (x) x_l : x_i in P_i}.
Body projective_product(const std::vector<Body>& ps);
/// (P_1° (x)_pi ... (x)_pi P_l°)°.
Body injective_product(const std::vector<Body>& ps);
/// (A_1 (x) ... (x) A_l)(B_2) with A_i = xi(E_i).
Body hilbert_product(const std::vector<Body>& es);

/// Embedding x -> e_1 (x) ... (x) x (x) ... (x) e_1 with x in slot i.
Mat slot_embedding(const TensorShape& s, int slot);

}  // namespace tensorial
