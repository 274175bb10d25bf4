#include "eirnri/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

namespace eirnri {

double rel_err(const Matrix& x, const Matrix& x_star) {
    if (x.rows() != x_star.rows() || x.cols() != x_star.cols())
        throw std::invalid_argument("rel_err: shape mismatch");
    const double denom = x_star.norm();
    if (denom == 0.0) throw std::invalid_argument("rel_err: reference matrix is zero");
    return (x - x_star).norm() / denom;
}

namespace {

// ||U_r^T G V_r + lambda p diag(sigma_r^{p-1})||_F from the precomputed
// product gv = G * V (at least r columns).
double support_distance(const Matrix& gv, const Matrix& u, const Vector& sigma, int r,
                        double lambda, double p) {
    Matrix block = u.leftCols(r).transpose() * gv.leftCols(r);
    for (int i = 0; i < r; ++i) block(i, i) += lambda * p * std::pow(sigma(i), p - 1.0);
    return block.norm();
}

}  // namespace

double rel_dist(const ProblemInstance& instance, const Matrix& x, const ThinSvd& svd_x,
                double lambda, double p, bool* degenerate_rank) {
    const int r = rank_of(svd_x.s, RankMode::exact_zero);
    if (degenerate_rank) *degenerate_rank = (r == 0);
    if (r == 0) return 0.0;
    const Matrix g = loss_gradient(instance, x);
    const Matrix gv = g * svd_x.v.leftCols(r);
    return support_distance(gv, svd_x.u, svd_x.s, r, lambda, p) / instance.observed_norm();
}

namespace {

double error_norm_from_products(const Matrix& g, const Matrix& gv, const WeightedSvtResult& svt,
                                const Vector& weights_prev, double beta, double lambda, double p) {
    // E = G + U diag(t) V^T with t_i = lambda wbar_i xi_i; on the support
    // wbar_i = p sigma_i^{p-1}, xi_i = 1; on the zero set the clamped
    // product lambda w_i^k xi_i = min(2 beta Sigma_i, lambda w_i^k).
    const int k = static_cast<int>(svt.svd.s.size());
    Vector t = certificate_products(svt, weights_prev, beta, lambda);
    for (int i = 0; i < svt.support_size; ++i) t(i) = lambda * p * std::pow(svt.svd.s(i), p - 1.0);
    // ||E||^2 = ||G||^2 + 2 sum_i t_i (U^T G V)_ii + ||t||^2.
    double cross = 0.0;
    for (int i = 0; i < k; ++i) cross += t(i) * svt.svd.u.col(i).dot(gv.col(i));
    const double sq = g.squaredNorm() + 2.0 * cross + t.squaredNorm();
    return std::sqrt(std::max(sq, 0.0));
}

}  // namespace

double optimality_error(const ProblemInstance& instance, const WeightedSvtResult& svt,
                        const Vector& weights_prev, double beta, double lambda, double p) {
    const Matrix g = loss_gradient(instance, svt.x);
    const Matrix gv = g * svt.svd.v;
    return error_norm_from_products(g, gv, svt, weights_prev, beta, lambda, p);
}

IterateCertificates evaluate_certificates(const ProblemInstance& instance,
                                          const WeightedSvtResult& svt, const Vector& weights_prev,
                                          double beta, double lambda, double p) {
    IterateCertificates out;
    const Matrix g = loss_gradient(instance, svt.x);
    const Matrix gv = g * svt.svd.v;
    const int r = svt.support_size;
    out.degenerate_rank = (r == 0);
    out.rel_dist = r == 0 ? 0.0
                          : support_distance(gv, svt.svd.u, svt.svd.s, r, lambda, p) /
                                instance.observed_norm();
    out.opt_error = error_norm_from_products(g, gv, svt, weights_prev, beta, lambda, p);
    return out;
}

double psnr(const std::vector<Matrix>& restored, const std::vector<Matrix>& reference,
            bool* identical) {
    if (restored.size() != reference.size() || restored.empty())
        throw std::invalid_argument("psnr: channel count mismatch");
    if (restored.size() != 1 && restored.size() != 3)
        throw std::invalid_argument("psnr: expected 1 or 3 channels");
    double sq = 0.0;
    double count = 0.0;
    for (std::size_t c = 0; c < restored.size(); ++c) {
        if (restored[c].rows() != reference[c].rows() || restored[c].cols() != reference[c].cols())
            throw std::invalid_argument("psnr: shape mismatch");
        sq += (reference[c] - restored[c]).squaredNorm();
        count += static_cast<double>(reference[c].size());
    }
    const double mse = sq / count;
    if (identical) *identical = (mse == 0.0);
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

namespace {

void append_field(std::string& line, double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    line += buf;
}

}  // namespace

void write_trace_csv(std::ostream& os, const std::vector<IterationRecord>& trace) {
    os << "k,f,penalty,objective,H,rel_err,rel_dist,rank,step_fro,step_inf,"
          "eps_sup_max,eps_zero_max,alpha\n";
    std::string line;
    for (const auto& rec : trace) {
        line.clear();
        line += std::to_string(rec.k);
        line += ',';
        append_field(line, rec.f_val);
        line += ',';
        append_field(line, rec.penalty_val);
        line += ',';
        append_field(line, rec.objective);
        line += ',';
        append_field(line, rec.merit_h);
        line += ',';
        if (!std::isnan(rec.rel_err)) append_field(line, rec.rel_err);
        line += ',';
        append_field(line, rec.rel_dist);
        line += ',';
        line += std::to_string(rec.rank);
        line += ',';
        append_field(line, rec.step_fro);
        line += ',';
        append_field(line, rec.step_inf);
        line += ',';
        append_field(line, rec.eps_max_support);
        line += ',';
        append_field(line, rec.eps_max_zeroset);
        line += ',';
        append_field(line, rec.alpha_used);
        line += '\n';
        os << line;
    }
}

void write_trace_csv(const std::string& path, const std::vector<IterationRecord>& trace) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_trace_csv: cannot open " + path);
    write_trace_csv(os, trace);
}

}  // namespace eirnri
