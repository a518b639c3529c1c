#include "hexpress/mma.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hexpress {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MmaOptimizer::MmaOptimizer(int n_vars, int n_cons, Params params)
    : n_(n_vars), m_(n_cons), prm_(params) {
  if (n_ < 1 || m_ < 1) throw std::invalid_argument("MmaOptimizer: need >= 1 variable/constraint");
  reset();
}

void MmaOptimizer::reset() {
  iter_ = 0;
  xold1_.resize(0);
  xold2_.resize(0);
  low_.resize(0);
  upp_.resize(0);
}

VectorXd MmaOptimizer::step(const VectorXd& x, const VectorXd& df0dx, const VectorXd& fval,
                            const MatrixXd& dfdx, const VectorXd& xmin, const VectorXd& xmax) {
  if (x.size() != n_ || df0dx.size() != n_ || xmin.size() != n_ || xmax.size() != n_ ||
      fval.size() != m_ || dfdx.rows() != m_ || dfdx.cols() != n_)
    throw std::invalid_argument("MmaOptimizer::step: dimension mismatch");
  for (int i = 0; i < n_; ++i)
    if (!std::isfinite(df0dx[i]))
      throw std::runtime_error("MmaOptimizer::step: non-finite objective gradient at variable " +
                               std::to_string(i));
  for (int j = 0; j < m_; ++j)
    for (int i = 0; i < n_; ++i)
      if (!std::isfinite(dfdx(j, i)))
        throw std::runtime_error("MmaOptimizer::step: non-finite gradient of constraint " +
                                 std::to_string(j) + " at variable " + std::to_string(i));

  ++iter_;
  const VectorXd range = (xmax - xmin).cwiseMax(1e-10);

  if (iter_ <= 2) {
    low_ = x - prm_.asyinit * range;
    upp_ = x + prm_.asyinit * range;
  } else {
    for (int i = 0; i < n_; ++i) {
      const double osc = (x[i] - xold1_[i]) * (xold1_[i] - xold2_[i]);
      const double factor = osc > 0 ? prm_.asyincr : (osc < 0 ? prm_.asydecr : 1.0);
      low_[i] = x[i] - factor * (xold1_[i] - low_[i]);
      upp_[i] = x[i] + factor * (upp_[i] - xold1_[i]);
      low_[i] = std::clamp(low_[i], x[i] - 10.0 * range[i], x[i] - 0.01 * range[i]);
      upp_[i] = std::clamp(upp_[i], x[i] + 0.01 * range[i], x[i] + 10.0 * range[i]);
    }
  }
  xold2_ = (iter_ >= 2) ? xold1_ : x;
  xold1_ = x;

  VectorXd alfa(n_), beta(n_);
  for (int i = 0; i < n_; ++i) {
    alfa[i] = std::max({low_[i] + prm_.albefa * (x[i] - low_[i]),
                        x[i] - prm_.move * range[i], xmin[i]});
    beta[i] = std::min({upp_[i] - prm_.albefa * (upp_[i] - x[i]),
                        x[i] + prm_.move * range[i], xmax[i]});
  }

  // Separable approximation coefficients.
  VectorXd p0(n_), q0(n_);
  MatrixXd P(m_, n_), Q(m_, n_);
  VectorXd b = -fval;
  for (int i = 0; i < n_; ++i) {
    const double ux = upp_[i] - x[i], xl = x[i] - low_[i];
    const double ux2 = ux * ux, xl2 = xl * xl;
    const double gp = std::max(df0dx[i], 0.0), gm = std::max(-df0dx[i], 0.0);
    const double pq = 0.001 * (gp + gm) + prm_.raa0 / range[i];
    p0[i] = (gp + pq) * ux2;
    q0[i] = (gm + pq) * xl2;
    for (int j = 0; j < m_; ++j) {
      const double cp = std::max(dfdx(j, i), 0.0), cm = std::max(-dfdx(j, i), 0.0);
      const double cpq = 0.001 * (cp + cm) + prm_.raa0 / range[i];
      P(j, i) = (cp + cpq) * ux2;
      Q(j, i) = (cm + cpq) * xl2;
      b[j] += P(j, i) / ux + Q(j, i) / xl;
    }
  }

  return subsolve(alfa, beta, p0, q0, P, Q, b);
}

// Primal-dual interior point solve of the MMA subproblem (dual dimension m).
VectorXd MmaOptimizer::subsolve(const VectorXd& alfa, const VectorXd& beta,
                                const VectorXd& p0, const VectorXd& q0,
                                const MatrixXd& P, const MatrixXd& Q,
                                const VectorXd& b) const {
  const double a0 = 1.0;
  const VectorXd a = VectorXd::Zero(m_);
  const VectorXd c = VectorXd::Constant(m_, prm_.c);
  const VectorXd d = VectorXd::Ones(m_);

  VectorXd x = 0.5 * (alfa + beta);
  VectorXd y = VectorXd::Ones(m_);
  double z = 1.0;
  VectorXd lam = VectorXd::Ones(m_);
  VectorXd xsi = (x - alfa).cwiseInverse().cwiseMax(1.0);
  VectorXd eta = (beta - x).cwiseInverse().cwiseMax(1.0);
  VectorXd mu = (0.5 * c).cwiseMax(1.0);
  double zet = 1.0;
  VectorXd s = VectorXd::Ones(m_);

  double epsi = 1.0;
  while (epsi > prm_.epsimin) {
    auto residual = [&](const VectorXd& x_, const VectorXd& y_, double z_, const VectorXd& lam_,
                        const VectorXd& xsi_, const VectorXd& eta_, const VectorXd& mu_,
                        double zet_, const VectorXd& s_, double* maxres) {
      const VectorXd ux = upp_ - x_, xl = x_ - low_;
      const VectorXd plam = p0 + P.transpose() * lam_;
      const VectorXd qlam = q0 + Q.transpose() * lam_;
      const VectorXd gvec = P * ux.cwiseInverse() + Q * xl.cwiseInverse();

      VectorXd res(3 * n_ + 4 * m_ + 2);
      int k = 0;
      for (int i = 0; i < n_; ++i)
        res[k++] = plam[i] / (ux[i] * ux[i]) - qlam[i] / (xl[i] * xl[i]) - xsi_[i] + eta_[i];
      for (int j = 0; j < m_; ++j) res[k++] = c[j] + d[j] * y_[j] - mu_[j] - lam_[j];
      res[k++] = a0 - zet_ - a.dot(lam_);
      for (int j = 0; j < m_; ++j) res[k++] = gvec[j] - a[j] * z_ - y_[j] + s_[j] - b[j];
      for (int i = 0; i < n_; ++i) res[k++] = xsi_[i] * (x_[i] - alfa[i]) - epsi;
      for (int i = 0; i < n_; ++i) res[k++] = eta_[i] * (beta[i] - x_[i]) - epsi;
      for (int j = 0; j < m_; ++j) res[k++] = mu_[j] * y_[j] - epsi;
      res[k++] = zet_ * z_ - epsi;
      for (int j = 0; j < m_; ++j) res[k++] = lam_[j] * s_[j] - epsi;
      if (maxres) *maxres = res.cwiseAbs().maxCoeff();
      return res.norm();
    };

    double resmax = 0.0;
    double resnorm = residual(x, y, z, lam, xsi, eta, mu, zet, s, &resmax);

    for (int it = 0; it < 500 && resmax > 0.9 * epsi; ++it) {
      const VectorXd ux = upp_ - x, xl = x - low_;
      const VectorXd ux2 = ux.cwiseProduct(ux), xl2 = xl.cwiseProduct(xl);
      const VectorXd ux3 = ux2.cwiseProduct(ux), xl3 = xl2.cwiseProduct(xl);
      const VectorXd plam = p0 + P.transpose() * lam;
      const VectorXd qlam = q0 + Q.transpose() * lam;
      const VectorXd gvec = P * ux.cwiseInverse() + Q * xl.cwiseInverse();
      MatrixXd GG(m_, n_);
      for (int j = 0; j < m_; ++j)
        for (int i = 0; i < n_; ++i) GG(j, i) = P(j, i) / ux2[i] - Q(j, i) / xl2[i];

      VectorXd delx(n_), diagx(n_);
      for (int i = 0; i < n_; ++i) {
        delx[i] = plam[i] / ux2[i] - qlam[i] / xl2[i] - epsi / (x[i] - alfa[i]) +
                  epsi / (beta[i] - x[i]);
        diagx[i] = 2.0 * (plam[i] / ux3[i] + qlam[i] / xl3[i]) + xsi[i] / (x[i] - alfa[i]) +
                   eta[i] / (beta[i] - x[i]);
      }
      const VectorXd dely = c + d.cwiseProduct(y) - lam - epsi * y.cwiseInverse();
      const double delz = a0 - a.dot(lam) - epsi / z;
      const VectorXd dellam = gvec - a * z - y - b + epsi * lam.cwiseInverse();
      const VectorXd diagy = d + mu.cwiseQuotient(y);
      const VectorXd diaglamyi = s.cwiseQuotient(lam) + diagy.cwiseInverse();

      // n >> m here, so solve the (m+1)-dimensional condensed system.
      MatrixXd AA(m_ + 1, m_ + 1);
      AA.setZero();
      AA.topLeftCorner(m_, m_) =
          MatrixXd(diaglamyi.asDiagonal()) + GG * diagx.cwiseInverse().asDiagonal() * GG.transpose();
      AA.topRightCorner(m_, 1) = a;
      AA.bottomLeftCorner(1, m_) = a.transpose();
      AA(m_, m_) = -zet / z;
      VectorXd bb(m_ + 1);
      bb.head(m_) = dellam + dely.cwiseQuotient(diagy) - GG * delx.cwiseQuotient(diagx);
      bb[m_] = delz;
      const VectorXd solut = AA.fullPivLu().solve(bb);
      const VectorXd dlam = solut.head(m_);
      const double dz = solut[m_];

      const VectorXd dx = -delx.cwiseQuotient(diagx) -
                          (GG.transpose() * dlam).cwiseQuotient(diagx);
      const VectorXd dy = -dely.cwiseQuotient(diagy) + dlam.cwiseQuotient(diagy);
      VectorXd dxsi(n_), deta(n_);
      for (int i = 0; i < n_; ++i) {
        dxsi[i] = -xsi[i] + epsi / (x[i] - alfa[i]) - xsi[i] * dx[i] / (x[i] - alfa[i]);
        deta[i] = -eta[i] + epsi / (beta[i] - x[i]) + eta[i] * dx[i] / (beta[i] - x[i]);
      }
      const VectorXd dmu = -mu + epsi * y.cwiseInverse() - mu.cwiseProduct(dy).cwiseQuotient(y);
      const double dzet = -zet + epsi / z - zet * dz / z;
      const VectorXd ds = -s + epsi * lam.cwiseInverse() - s.cwiseProduct(dlam).cwiseQuotient(lam);

      // Largest step keeping all positivity constraints; then backtrack on
      // the residual norm.
      double stminv = 1.0;
      auto bound = [&stminv](double dv, double v) {
        stminv = std::max(stminv, -1.01 * dv / v);
      };
      for (int i = 0; i < n_; ++i) {
        bound(dx[i], x[i] - alfa[i]);
        bound(-dx[i], beta[i] - x[i]);
        bound(dxsi[i], xsi[i]);
        bound(deta[i], eta[i]);
      }
      for (int j = 0; j < m_; ++j) {
        bound(dy[j], y[j]);
        bound(dlam[j], lam[j]);
        bound(dmu[j], mu[j]);
        bound(ds[j], s[j]);
      }
      bound(dz, z);
      bound(dzet, zet);
      double steg = 1.0 / stminv;

      const VectorXd x0 = x, y0 = y, lam0 = lam, xsi0 = xsi, eta0 = eta, mu0 = mu, s0 = s;
      const double z0 = z, zet0 = zet;
      double newnorm = 2.0 * resnorm;
      for (int half = 0; half < 50 && newnorm > resnorm; ++half) {
        x = x0 + steg * dx;
        y = y0 + steg * dy;
        z = z0 + steg * dz;
        lam = lam0 + steg * dlam;
        xsi = xsi0 + steg * dxsi;
        eta = eta0 + steg * deta;
        mu = mu0 + steg * dmu;
        zet = zet0 + steg * dzet;
        s = s0 + steg * ds;
        newnorm = residual(x, y, z, lam, xsi, eta, mu, zet, s, &resmax);
        steg *= 0.5;
      }
      resnorm = newnorm;
    }
    epsi *= 0.1;
  }
  return x;
}

VectorXd relax_step(const VectorXd& psi_old, const VectorXd& psi_current, double S) {
  if (psi_old.size() != psi_current.size())
    throw std::invalid_argument("relax_step: size mismatch");
  if (!(S >= 0.0 && S <= 1.0)) throw std::invalid_argument("relax_step: S must be in [0, 1]");
  return psi_old + S * (psi_current - psi_old);
}

}  // namespace hexpress
