#include "kstab/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kstab {

std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n,
                                       double tol, int max_sweeps) {
    if (a.size() != n * n) throw std::invalid_argument("jacobi_eigenvalues: size mismatch");
    auto off = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
        return s;
    };
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    const double thresh = tol * tol * std::max(scale * scale, 1e-300);

    for (int sweep = 0; sweep < max_sweeps && off() > thresh; ++sweep) {
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a[p * n + q];
                if (apq == 0.0) continue;
                double app = a[p * n + p], aqq = a[q * n + q];
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a[i * n + i];
    std::sort(eig.begin(), eig.end());
    return eig;
}

}  // namespace kstab
