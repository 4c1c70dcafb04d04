#pragma once

#include "psfront/loop.hpp"

namespace psfront {

struct BirkhoffOptions {
    double rcond_min = 1e-12;  // below this the block-Toeplitz solve is rejected
    bool retry_double_order = true;
    int node_x = 0, node_y = 0;
    bool has_node = false;  // annotate IllConditioned with grid coordinates
    double fx = 0.0, fy = 0.0;
};

// G = H_- H_+ with H_- = I + O(lambda^{-1}) and H_+ a power series in lambda.
struct BirkhoffResult {
    TwistedLoop h_minus;
    TwistedLoop h_plus;
    double residual = 0.0;  // max coefficient norm of H_- H_+ - G
    double rcond = 1.0;
    int order_used = 0;
};

// Normalized Birkhoff factorization of a twisted det-1 loop. The unknown
// W = H_-^{-1} = I + sum_{j=1..N} w_j lambda^{-j} is determined by requiring
// the strictly negative Fourier coefficients of W*G inside the band to vanish;
// after the twisting reduction this is a 2N x 2N complex block-Toeplitz system,
// solved densely by partial-pivot LU. Then H_+ = P_+(W*G) and H_- = adj(W).
BirkhoffResult birkhoff_factor(const TwistedLoop& g, const BirkhoffOptions& opts = {});

// Plus-normalized factorization g = P_+ Q_- with P_+(0) = I, by factoring the
// lambda -> 1/lambda reversal. Returns (P_+, Q_-) in that order.
struct PlusNormalizedResult {
    TwistedLoop p_plus;
    TwistedLoop q_minus;
    double residual = 0.0;
};
PlusNormalizedResult birkhoff_factor_plus_normalized(const TwistedLoop& g,
                                                     const BirkhoffOptions& opts = {});

}  // namespace psfront
