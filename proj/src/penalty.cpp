#include "slbi/penalty.hpp"

#include <cmath>

namespace slbi {

PenaltySpec PenaltySpec::lasso(std::size_t numel) {
    PenaltySpec s;
    s.kind = PenaltyKind::Lasso;
    s.groups = GroupIndex::singletons(numel);
    return s;
}

PenaltySpec PenaltySpec::group_lasso(GroupIndex groups) {
    PenaltySpec s;
    s.kind = PenaltyKind::GroupLasso;
    s.groups = std::move(groups);
    return s;
}

static void require_covers(const Tensor& t, const PenaltySpec& spec, const char* who) {
    std::size_t total = 0;
    for (const auto& g : spec.groups.groups) total += g.size();
    if (total != t.numel())
        throw std::invalid_argument(std::string(who) + ": penalty groups cover " + std::to_string(total) +
                                    " elements, tensor has " + std::to_string(t.numel()));
}

double omega(const Tensor& gamma, const PenaltySpec& spec) {
    require_covers(gamma, spec, "omega");
    if (spec.kind == PenaltyKind::Lasso) {
        double s = 0.0;
        for (std::size_t i = 0; i < gamma.numel(); ++i) s += std::abs(gamma[i]);
        return s;
    }
    double s = 0.0;
    const Tensor norms = group_l2_norm(gamma, spec.groups);
    for (std::size_t g = 0; g < norms.numel(); ++g) s += norms[g];
    return s;
}

Tensor prox(const Tensor& z, double kappa, const PenaltySpec& spec) {
    if (kappa <= 0.0) throw std::invalid_argument("prox: kappa must be > 0");
    require_covers(z, spec, "prox");
    Tensor gamma(z.shape());
    if (spec.kind == PenaltyKind::Lasso) {
        for (std::size_t i = 0; i < z.numel(); ++i) {
            const double a = std::abs(z[i]);
            gamma[i] = a > 1.0 ? kappa * (z[i] > 0 ? a - 1.0 : 1.0 - a) : 0.0;
        }
        return gamma;
    }
    for (const auto& idx : spec.groups.groups) {
        double sq = 0.0;
        for (std::size_t i : idx) sq += z[i] * z[i];
        const double norm = std::sqrt(sq);
        if (norm > 1.0) {
            const double scale = kappa * (1.0 - 1.0 / norm);
            for (std::size_t i : idx) gamma[i] = scale * z[i];
        }
        // else: exact zeros, already there
    }
    return gamma;
}

Tensor proj_support(const Tensor& w, const Tensor& gamma, const PenaltySpec& spec) {
    if (!w.same_shape(gamma))
        throw std::invalid_argument("proj_support: shape mismatch " + shape_str(w.shape()) +
                                    " vs " + shape_str(gamma.shape()));
    require_covers(w, spec, "proj_support");
    Tensor out(w.shape());
    if (spec.kind == PenaltyKind::Lasso) {
        for (std::size_t i = 0; i < w.numel(); ++i)
            if (gamma[i] != 0.0) out[i] = w[i];
        return out;
    }
    for (const auto& idx : spec.groups.groups) {
        bool active = false;
        for (std::size_t i : idx)
            if (gamma[i] != 0.0) { active = true; break; }
        if (active)
            for (std::size_t i : idx) out[i] = w[i];
    }
    return out;
}

bool moreau_check(const Tensor& z, const Tensor& gamma, double kappa,
                  const PenaltySpec& spec, double tol) {
    if (!z.same_shape(gamma)) return false;
    require_covers(z, spec, "moreau_check");
    if (spec.kind == PenaltyKind::Lasso) {
        for (std::size_t i = 0; i < z.numel(); ++i) {
            if (gamma[i] != 0.0) {
                const double sign = gamma[i] > 0 ? 1.0 : -1.0;
                if (std::abs(z[i] - (gamma[i] / kappa + sign)) > tol) return false;
            } else {
                if (std::abs(z[i]) > 1.0 + tol) return false;
            }
        }
        return true;
    }
    for (const auto& idx : spec.groups.groups) {
        double gsq = 0.0, zsq = 0.0;
        for (std::size_t i : idx) {
            gsq += gamma[i] * gamma[i];
            zsq += z[i] * z[i];
        }
        const double gnorm = std::sqrt(gsq);
        if (gnorm > 0.0) {
            for (std::size_t i : idx)
                if (std::abs(z[i] - (gamma[i] / kappa + gamma[i] / gnorm)) > tol) return false;
        } else {
            if (std::sqrt(zsq) > 1.0 + tol) return false;
        }
    }
    return true;
}

}  // namespace slbi
