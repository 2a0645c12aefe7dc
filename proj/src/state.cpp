#include "vdnet/state.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace vdnet {

namespace {

constexpr Complex kI(0.0, 1.0);

// Calls f(base) for every index in [0, dim) whose bits at `pos` are all 0.
template <typename F>
void for_each_base(std::size_t dim, std::vector<int> pos, F&& f) {
    std::sort(pos.begin(), pos.end());
    std::size_t count = dim >> pos.size();
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t b = i;
        for (int p : pos) {
            std::size_t m = (std::size_t(1) << p) - 1;
            b = (b & m) | ((b & ~m) << 1);
        }
        f(b);
    }
}

struct PauliMasks {
    std::size_t x = 0, y = 0, z = 0, flip = 0;
    int numY = 0;
};

PauliMasks masks_of(const PauliString& p) {
    PauliMasks m;
    for (int i = 0; i < p.width(); ++i) {
        std::size_t bit = std::size_t(1) << i;
        switch (p.ops[i]) {
            case 'I': break;
            case 'X': m.x |= bit; break;
            case 'Y': m.y |= bit; ++m.numY; break;
            case 'Z': m.z |= bit; break;
            default:
                throw std::invalid_argument("PauliString letter must be one of I,X,Y,Z");
        }
    }
    m.flip = m.x | m.y;
    return m;
}

// phase(d) with P|d> = phase(d)|d ^ flip>
inline Complex pauli_phase(const PauliMasks& m, std::size_t d) {
    static const Complex ipow[4] = {1.0, kI, -1.0, -kI};
    int sign = std::popcount(d & (m.y | m.z)) & 1;
    Complex ph = ipow[m.numY & 3];
    return sign ? -ph : ph;
}

void check_density(const QuantumState& s, const char* what) {
    if (s.kind != StateKind::Density)
        throw std::invalid_argument(std::string(what) + " requires a density-matrix state");
}

}  // namespace

PauliString identity_string(int width) {
    return PauliString{std::string(width, 'I'), 1.0};
}

Matrix pauli_matrix(char p) {
    Matrix m(2, 2);
    switch (p) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, -kI, kI, 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("unknown Pauli letter");
    }
    return m;
}

QuantumState QuantumState::zero_state(int width, StateKind kind) {
    if (width < 1) throw std::invalid_argument("width must be >= 1");
    int cap = kind == StateKind::Statevector ? kStatevectorWidthCap : kDensityWidthCap;
    if (width > cap) throw std::invalid_argument("width exceeds mode cap");
    QuantumState s;
    s.kind = kind;
    s.width = width;
    s.clocks.assign(width, 0.0);
    std::size_t d = std::size_t(1) << width;
    if (kind == StateKind::Statevector) {
        s.vec = Vector::Zero(d);
        s.vec(0) = 1.0;
    } else {
        s.rho = Matrix::Zero(d, d);
        s.rho(0, 0) = 1.0;
    }
    return s;
}

QuantumState QuantumState::from_vector(Vector v) {
    int w = 0;
    while ((std::size_t(1) << w) < std::size_t(v.size())) ++w;
    if ((std::size_t(1) << w) != std::size_t(v.size()))
        throw std::invalid_argument("statevector length must be a power of two");
    QuantumState s;
    s.kind = StateKind::Statevector;
    s.width = w;
    s.vec = std::move(v);
    s.clocks.assign(w, 0.0);
    return s;
}

QuantumState QuantumState::from_density(Matrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("density matrix must be square");
    int w = 0;
    while ((std::size_t(1) << w) < std::size_t(m.rows())) ++w;
    if ((std::size_t(1) << w) != std::size_t(m.rows()))
        throw std::invalid_argument("density dimension must be a power of two");
    QuantumState s;
    s.kind = StateKind::Density;
    s.width = w;
    s.rho = std::move(m);
    s.clocks.assign(w, 0.0);
    return s;
}

QuantumState QuantumState::to_density() const {
    if (kind == StateKind::Density) return *this;
    QuantumState s;
    s.kind = StateKind::Density;
    s.width = width;
    s.clocks = clocks;
    s.rho = vec * vec.adjoint();
    return s;
}

void QuantumState::validate(double tol) const {
    if (kind == StateKind::Statevector) {
        double n = vec.norm();
        if (std::abs(n - 1.0) > tol)
            throw std::runtime_error("statevector norm deviates from 1");
        return;
    }
    double trDev = std::abs(rho.trace() - Complex(1.0));
    if (trDev > tol) throw std::runtime_error("density trace deviates from 1");
    double hermDev = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (hermDev > tol) throw std::runtime_error("density matrix not Hermitian");
    // Full eigenvalue check only at small widths; it is cubic in dimension.
    if (width <= 8) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-9)
            throw std::runtime_error("density matrix has a negative eigenvalue");
    }
}

void apply_on_array(Complex* data, std::size_t dim, const Matrix& u, const std::vector<int>& targets) {
    int k = static_cast<int>(targets.size());
    if (k == 1) {
        std::size_t s = std::size_t(1) << targets[0];
        Complex u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
        for (std::size_t g = 0; g < dim; g += 2 * s) {
            for (std::size_t i = g; i < g + s; ++i) {
                Complex a = data[i], b = data[i + s];
                data[i] = u00 * a + u01 * b;
                data[i + s] = u10 * a + u11 * b;
            }
        }
        return;
    }
    std::size_t nAmps = std::size_t(1) << k;
    // offset of each local basis state: bit j of the local index lives at
    // global position targets[j]
    std::vector<std::size_t> off(nAmps, 0);
    for (std::size_t m = 0; m < nAmps; ++m)
        for (int j = 0; j < k; ++j)
            if (m & (std::size_t(1) << j)) off[m] += std::size_t(1) << targets[j];
    std::vector<Complex> amp(nAmps), out(nAmps);
    for_each_base(dim, targets, [&](std::size_t base) {
        for (std::size_t m = 0; m < nAmps; ++m) amp[m] = data[base + off[m]];
        for (std::size_t r = 0; r < nAmps; ++r) {
            Complex acc = 0.0;
            for (std::size_t c = 0; c < nAmps; ++c) acc += u(r, c) * amp[c];
            out[r] = acc;
        }
        for (std::size_t m = 0; m < nAmps; ++m) data[base + off[m]] = out[m];
    });
}

namespace {

bool is_diagonal(const Matrix& u) {
    for (Eigen::Index r = 0; r < u.rows(); ++r)
        for (Eigen::Index c = 0; c < u.cols(); ++c)
            if (r != c && std::abs(u(r, c)) > 0.0) return false;
    return true;
}

void apply_diag_on_array(Complex* data, std::size_t dim, const Matrix& u,
                         const std::vector<int>& targets) {
    int k = static_cast<int>(targets.size());
    if (k == 1) {
        std::size_t s = std::size_t(1) << targets[0];
        Complex d0 = u(0, 0), d1 = u(1, 1);
        for (std::size_t g = 0; g < dim; g += 2 * s) {
            for (std::size_t i = g; i < g + s; ++i) {
                data[i] *= d0;
                data[i + s] *= d1;
            }
        }
        return;
    }
    for (std::size_t i = 0; i < dim; ++i) {
        std::size_t loc = 0;
        for (int j = 0; j < k; ++j)
            if (i & (std::size_t(1) << targets[j])) loc |= std::size_t(1) << j;
        data[i] *= u(loc, loc);
    }
}

}  // namespace

void apply_unitary(QuantumState& state, const Matrix& u, const std::vector<int>& targets) {
    int k = static_cast<int>(targets.size());
    if (k < 1) throw std::invalid_argument("apply_unitary needs at least one target");
    if (u.rows() != u.cols() || u.rows() != (Eigen::Index(1) << k))
        throw std::invalid_argument("matrix dimension does not match target count");
    for (int i = 0; i < k; ++i) {
        if (targets[i] < 0 || targets[i] >= state.width)
            throw std::invalid_argument("target out of range");
        for (int j = i + 1; j < k; ++j)
            if (targets[i] == targets[j]) throw std::invalid_argument("duplicate targets");
    }
    if ((u * u.adjoint() - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("matrix is not unitary");

    bool diag = is_diagonal(u);
    if (state.kind == StateKind::Statevector) {
        if (diag)
            apply_diag_on_array(state.vec.data(), state.dim(), u, targets);
        else
            apply_on_array(state.vec.data(), state.dim(), u, targets);
        return;
    }
    std::size_t dim2 = state.dim() * state.dim();
    std::vector<int> colTargets(targets);
    for (int& t : colTargets) t += state.width;
    Matrix uc = u.conjugate();
    if (diag) {
        apply_diag_on_array(state.rho.data(), dim2, u, targets);
        apply_diag_on_array(state.rho.data(), dim2, uc, colTargets);
    } else {
        apply_on_array(state.rho.data(), dim2, u, targets);
        apply_on_array(state.rho.data(), dim2, uc, colTargets);
    }
}

void apply_pauli(QuantumState& state, const PauliString& p) {
    if (p.width() != state.width) throw std::invalid_argument("Pauli width mismatch");
    PauliMasks m = masks_of(p);
    auto apply_vec = [&](Complex* data, std::size_t dim, const PauliMasks& mm) {
        if (mm.flip == 0) {
            for (std::size_t d = 0; d < dim; ++d) data[d] *= pauli_phase(mm, d);
            return;
        }
        for (std::size_t d = 0; d < dim; ++d) {
            std::size_t e = d ^ mm.flip;
            if (d < e) {
                // psi'[d] = phase(e) psi[e]; psi'[e] = phase(d) psi[d]
                Complex a = data[d], b = data[e];
                data[d] = pauli_phase(mm, e) * b;
                data[e] = pauli_phase(mm, d) * a;
            }
        }
    };
    if (state.kind == StateKind::Statevector) {
        apply_vec(state.vec.data(), state.dim(), m);
        return;
    }
    // rows get P, columns get conj(P)
    std::size_t dim2 = state.dim() * state.dim();
    PauliMasks rowM = m;
    PauliMasks colM;
    colM.x = m.x << state.width;
    colM.y = m.y << state.width;
    colM.z = m.z << state.width;
    colM.flip = m.flip << state.width;
    colM.numY = m.numY;
    auto apply_row = [&](const PauliMasks& mm, bool conj) {
        if (mm.flip == 0) {
            Complex* data = state.rho.data();
            for (std::size_t d = 0; d < dim2; ++d) {
                Complex ph = pauli_phase(mm, d);
                data[d] *= conj ? std::conj(ph) : ph;
            }
            return;
        }
        Complex* data = state.rho.data();
        for (std::size_t d = 0; d < dim2; ++d) {
            std::size_t e = d ^ mm.flip;
            if (d < e) {
                Complex pa = pauli_phase(mm, e), pb = pauli_phase(mm, d);
                if (conj) { pa = std::conj(pa); pb = std::conj(pb); }
                Complex a = data[d], b = data[e];
                data[d] = pa * b;
                data[e] = pb * a;
            }
        }
    };
    apply_row(rowM, false);
    apply_row(colM, true);
}

void apply_pauli_channel(QuantumState& state,
                         const std::vector<std::pair<double, PauliString>>& terms) {
    check_density(state, "apply_pauli_channel");
    double total = 0.0;
    for (const auto& [p, str] : terms) {
        if (p < 0) throw std::invalid_argument("channel probability must be >= 0");
        if (str.width() != state.width) throw std::invalid_argument("Pauli width mismatch");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("channel probabilities must sum to 1");
    Matrix acc = Matrix::Zero(state.rho.rows(), state.rho.cols());
    for (const auto& [p, str] : terms) {
        if (p == 0.0) continue;
        QuantumState tmp = state;
        apply_pauli(tmp, str);
        acc += p * tmp.rho;
    }
    state.rho = std::move(acc);
}

void apply_depolarizing1(QuantumState& state, int q, double p) {
    if (p == 0.0) return;
    check_density(state, "apply_depolarizing1");
    double a = 1.0 - 4.0 * p / 3.0;
    double b = 4.0 * p / 3.0;
    std::size_t dim2 = state.dim() * state.dim();
    std::size_t sr = std::size_t(1) << q;
    std::size_t sc = std::size_t(1) << (q + state.width);
    Complex* d = state.rho.data();
    for_each_base(dim2, {q, q + state.width}, [&](std::size_t base) {
        Complex m = 0.5 * (d[base] + d[base + sr + sc]);
        d[base] = a * d[base] + b * m;
        d[base + sr + sc] = a * d[base + sr + sc] + b * m;
        d[base + sr] *= a;
        d[base + sc] *= a;
    });
}

void apply_depolarizing2(QuantumState& state, int q1, int q2, double p) {
    if (p == 0.0) return;
    check_density(state, "apply_depolarizing2");
    double a = 1.0 - 16.0 * p / 15.0;
    double b = 16.0 * p / 15.0;
    int W = state.width;
    std::size_t dim2 = state.dim() * state.dim();
    std::size_t s1 = std::size_t(1) << q1, s2 = std::size_t(1) << q2;
    std::size_t c1 = s1 << W, c2 = s2 << W;
    Complex* d = state.rho.data();
    std::size_t rowOff[4] = {0, s1, s2, s1 + s2};
    std::size_t colOff[4] = {0, c1, c2, c1 + c2};
    for_each_base(dim2, {q1, q2, q1 + W, q2 + W}, [&](std::size_t base) {
        Complex tr = 0.0;
        for (int g = 0; g < 4; ++g) tr += d[base + rowOff[g] + colOff[g]];
        tr *= 0.25 * b;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                std::size_t i = base + rowOff[r] + colOff[c];
                d[i] = a * d[i] + (r == c ? tr : Complex(0.0));
            }
    });
}

void apply_dephasing(QuantumState& state, int q, double lambda) {
    if (lambda == 0.0) return;
    check_density(state, "apply_dephasing");
    double f = 1.0 - 2.0 * lambda;
    std::size_t dim2 = state.dim() * state.dim();
    std::size_t sr = std::size_t(1) << q;
    std::size_t sc = std::size_t(1) << (q + state.width);
    Complex* d = state.rho.data();
    for_each_base(dim2, {q, q + state.width}, [&](std::size_t base) {
        d[base + sr] *= f;
        d[base + sc] *= f;
    });
}

void apply_bitflip(QuantumState& state, int q, double p) {
    if (p == 0.0) return;
    check_density(state, "apply_bitflip");
    double a = 1.0 - p;
    std::size_t dim2 = state.dim() * state.dim();
    std::size_t sr = std::size_t(1) << q;
    std::size_t sc = std::size_t(1) << (q + state.width);
    Complex* d = state.rho.data();
    for_each_base(dim2, {q, q + state.width}, [&](std::size_t base) {
        auto mix = [&](std::size_t i, std::size_t j) {
            Complex x = d[i], y = d[j];
            d[i] = a * x + p * y;
            d[j] = a * y + p * x;
        };
        mix(base, base + sr + sc);
        mix(base + sr, base + sc);
    });
}

double prob_one(const QuantumState& state, int q) {
    std::size_t s = std::size_t(1) << q;
    double p = 0.0;
    if (state.kind == StateKind::Statevector) {
        for (std::size_t i = 0; i < state.dim(); ++i)
            if (i & s) p += std::norm(state.vec(i));
    } else {
        for (std::size_t i = 0; i < state.dim(); ++i)
            if (i & s) p += state.rho(i, i).real();
    }
    return p;
}

namespace {

void project_z(QuantumState& state, int q, int outcome) {
    std::size_t s = std::size_t(1) << q;
    if (state.kind == StateKind::Statevector) {
        for (std::size_t i = 0; i < state.dim(); ++i)
            if (((i & s) != 0) != (outcome == 1)) state.vec(i) = 0.0;
    } else {
        std::size_t sc = s << state.width;
        std::size_t dim2 = state.dim() * state.dim();
        Complex* d = state.rho.data();
        for (std::size_t i = 0; i < dim2; ++i) {
            bool rowSet = (i & s) != 0;
            bool colSet = (i & sc) != 0;
            if (rowSet != (outcome == 1) || colSet != (outcome == 1)) d[i] = 0.0;
        }
    }
}

Matrix hadamard2() {
    Matrix h(2, 2);
    double r = 1.0 / std::sqrt(2.0);
    h << r, r, r, -r;
    return h;
}

}  // namespace

int measure_qubit(QuantumState& state, int q, MeasureBasis basis, Rng& rng,
                  double detectionTime) {
    if (q < 0 || q >= state.width) throw std::invalid_argument("qubit out of range");
    if (basis == MeasureBasis::X) apply_unitary(state, hadamard2(), {q});
    double p1 = prob_one(state, q);
    double p0 = 1.0 - p1;
    if (p0 < 1e-14 && p1 < 1e-14)
        throw std::runtime_error("corrupted state: both measurement outcomes have zero probability");
    int outcome = rng.uniform() < p1 ? 1 : 0;
    double p = outcome == 1 ? p1 : p0;
    if (p < 1e-14)
        outcome = 1 - outcome, p = 1.0 - p;
    project_z(state, q, outcome);
    if (state.kind == StateKind::Statevector)
        state.vec /= std::sqrt(p);
    else
        state.rho /= p;
    if (basis == MeasureBasis::X) apply_unitary(state, hadamard2(), {q});
    state.clocks[q] += detectionTime;
    return outcome;
}

void reset_qubit(QuantumState& state, int q, Rng& rng, double prepTime) {
    if (q < 0 || q >= state.width) throw std::invalid_argument("qubit out of range");
    if (state.kind == StateKind::Statevector) {
        int m = measure_qubit(state, q, MeasureBasis::Z, rng, 0.0);
        if (m == 1) {
            PauliString x = identity_string(state.width);
            x.ops[q] = 'X';
            apply_pauli(state, x);
        }
    } else {
        // Non-selective measure-and-flip: |0><0| (x) Tr_q rho on qubit q.
        std::size_t sr = std::size_t(1) << q;
        std::size_t sc = sr << state.width;
        std::size_t dim2 = state.dim() * state.dim();
        Complex* d = state.rho.data();
        for_each_base(dim2, {q, q + state.width}, [&](std::size_t base) {
            d[base] += d[base + sr + sc];
            d[base + sr + sc] = 0.0;
            d[base + sr] = 0.0;
            d[base + sc] = 0.0;
        });
    }
    state.clocks[q] += prepTime;
}

double expectation(const QuantumState& state, const PauliString& p) {
    if (p.width() != state.width) throw std::invalid_argument("observable width mismatch");
    PauliMasks m = masks_of(p);
    Complex acc = 0.0;
    if (state.kind == StateKind::Statevector) {
        for (std::size_t d = 0; d < state.dim(); ++d) {
            Complex a = state.vec(d);
            if (a == Complex(0.0)) continue;
            acc += std::conj(state.vec(d ^ m.flip)) * pauli_phase(m, d) * a;
        }
    } else {
        for (std::size_t d = 0; d < state.dim(); ++d)
            acc += pauli_phase(m, d) * state.rho(d ^ m.flip, d);
    }
    return p.coefficient * acc.real();
}

double expectation(const QuantumState& state, const std::vector<PauliString>& obs) {
    double v = 0.0;
    for (const auto& p : obs) v += expectation(state, p);
    return v;
}

QuantumState partial_trace(const QuantumState& state, const std::vector<int>& keep) {
    QuantumState dm = state.kind == StateKind::Density ? state : state.to_density();
    int k = static_cast<int>(keep.size());
    std::vector<int> drop;
    for (int q = 0; q < state.width; ++q)
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) drop.push_back(q);
    std::size_t kd = std::size_t(1) << k;
    std::size_t dd = std::size_t(1) << drop.size();
    Matrix out = Matrix::Zero(kd, kd);
    auto expand = [](std::size_t bits, const std::vector<int>& pos) {
        std::size_t v = 0;
        for (std::size_t j = 0; j < pos.size(); ++j)
            if (bits & (std::size_t(1) << j)) v |= std::size_t(1) << pos[j];
        return v;
    };
    for (std::size_t r = 0; r < kd; ++r)
        for (std::size_t c = 0; c < kd; ++c) {
            std::size_t rb = expand(r, keep), cb = expand(c, keep);
            Complex acc = 0.0;
            for (std::size_t e = 0; e < dd; ++e) {
                std::size_t eb = expand(e, drop);
                acc += dm.rho(rb | eb, cb | eb);
            }
            out(r, c) = acc;
        }
    QuantumState res = QuantumState::from_density(std::move(out));
    for (int j = 0; j < k; ++j) res.clocks[j] = state.clocks[keep[j]];
    return res;
}

QuantumState kron(const QuantumState& a, const QuantumState& b) {
    int w = a.width + b.width;
    std::size_t da = a.dim(), db = b.dim();
    if (a.kind == StateKind::Statevector && b.kind == StateKind::Statevector) {
        Vector v(da * db);
        for (std::size_t ib = 0; ib < db; ++ib)
            for (std::size_t ia = 0; ia < da; ++ia)
                v(ia | (ib << a.width)) = a.vec(ia) * b.vec(ib);
        QuantumState s = QuantumState::from_vector(std::move(v));
        for (int q = 0; q < a.width; ++q) s.clocks[q] = a.clocks[q];
        for (int q = 0; q < b.width; ++q) s.clocks[a.width + q] = b.clocks[q];
        return s;
    }
    Matrix ra = a.kind == StateKind::Density ? a.rho : a.to_density().rho;
    Matrix rb = b.kind == StateKind::Density ? b.rho : b.to_density().rho;
    if (w > kDensityWidthCap) throw std::invalid_argument("kron result exceeds density cap");
    Matrix m(da * db, da * db);
    for (std::size_t rb_i = 0; rb_i < db; ++rb_i)
        for (std::size_t cb_i = 0; cb_i < db; ++cb_i)
            for (std::size_t ra_i = 0; ra_i < da; ++ra_i)
                for (std::size_t ca_i = 0; ca_i < da; ++ca_i)
                    m(ra_i | (rb_i << a.width), ca_i | (cb_i << a.width)) =
                        ra(ra_i, ca_i) * rb(rb_i, cb_i);
    QuantumState s = QuantumState::from_density(std::move(m));
    for (int q = 0; q < a.width; ++q) s.clocks[q] = a.clocks[q];
    for (int q = 0; q < b.width; ++q) s.clocks[a.width + q] = b.clocks[q];
    return s;
}

double purity(const QuantumState& state) {
    if (state.kind == StateKind::Statevector) return 1.0;
    return (state.rho * state.rho).trace().real();
}

double fidelity_pure(const QuantumState& state, const Vector& psi) {
    if (state.kind == StateKind::Statevector)
        return std::norm(psi.dot(state.vec));
    return (psi.adjoint() * state.rho * psi)(0, 0).real();
}

double trace_distance(const Matrix& a, const Matrix& b) {
    Matrix d = a - b;
    Eigen::SelfAdjointEigenSolver<Matrix> es(d, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace vdnet
