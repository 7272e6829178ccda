#pragma once

#include "slbi/tensor.hpp"

namespace slbi {

enum class PenaltyKind { Lasso, GroupLasso };

/// Sparsity penalty over a weight tensor. GroupLasso groups one conv
/// output filter per group; Lasso treats each element as its own group.
struct PenaltySpec {
    PenaltyKind kind = PenaltyKind::Lasso;
    GroupIndex groups;

    static PenaltySpec lasso(std::size_t numel);
    static PenaltySpec group_lasso(GroupIndex groups);

    std::size_t group_count(std::size_t numel) const {
        return kind == PenaltyKind::Lasso ? numel : groups.size();
    }
};

/// Omega(gamma): sum of group L2 norms (GroupLasso) or sum of |gamma_ij| (Lasso).
double omega(const Tensor& gamma, const PenaltySpec& spec);

/// Gamma = kappa * argmin_G  0.5*||G - z||^2 + Omega(G), in closed form.
/// GroupLasso: per group kappa*max(0, 1 - 1/||z^g||)*z^g.
/// Lasso: elementwise kappa*sign(z)*max(0, |z|-1).
Tensor prox(const Tensor& z, double kappa, const PenaltySpec& spec);

/// W-tilde: entries of w kept where gamma's owning group is nonzero, else 0.
Tensor proj_support(const Tensor& w, const Tensor& gamma, const PenaltySpec& spec);

/// Moreau-decomposition consistency of (z, gamma=prox(z,kappa)):
/// active groups satisfy z = gamma/kappa + gamma/||gamma|| (or sign for Lasso)
/// within tol; inactive groups have ||z^g|| <= 1.
bool moreau_check(const Tensor& z, const Tensor& gamma, double kappa,
                  const PenaltySpec& spec, double tol = 1e-10);

}  // namespace slbi
