#include "vdnet/heisenberg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace vdnet {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr Complex kI(0.0, 1.0);
}  // namespace

void HeisenbergParams::validate() const {
    if (N < 2) throw std::invalid_argument("Heisenberg chain needs N >= 2");
    if (static_cast<int>(h.size()) != N)
        throw std::invalid_argument("field vector length must equal N");
    for (double hj : h)
        if (std::abs(hj) > 1.0) throw std::invalid_argument("|h_j| must be <= 1");
    if (K < 0) throw std::invalid_argument("K must be >= 0");
    if (initSite < 1) throw std::invalid_argument("initSite is 1-based");
}

int HeisenbergParams::initQubit() const { return (initSite - 1) % N; }

std::vector<double> preset_h(int N) {
    switch (N) {
        case 4: return {-0.887, -0.925, -0.720, 0.080};
        case 5: return {0.206, -0.649, 0.598, -0.826, 0.702};
        case 6: return {-0.859, 0.396, -0.354, 0.634, -0.893, 0.198};
        default:
            throw std::invalid_argument("field presets exist for N in {4,5,6}");
    }
}

int trotter_steps_for_budget(int N, double p2Q) {
    if (N < 2) throw std::invalid_argument("N must be >= 2");
    if (p2Q <= 0.0) throw std::invalid_argument("p2Q must be positive");
    return static_cast<int>(std::floor(1.0 / (3.0 * N * p2Q)));
}

std::vector<std::pair<int, int>> even_bonds(int N) {
    std::vector<std::pair<int, int>> b;
    for (int j = 0; j < N; j += 2) {
        if (N % 2 == 1 && j == N - 1) break;  // leftover bond goes to the odd layer
        b.emplace_back(j, (j + 1) % N);
    }
    return b;
}

std::vector<std::pair<int, int>> odd_bonds(int N) {
    std::vector<std::pair<int, int>> b;
    for (int j = 1; j < N; j += 2) b.emplace_back(j, (j + 1) % N);
    if (N % 2 == 1) b.emplace_back(N - 1, 0);
    return b;
}

TimedCircuit build_trotter_circuit(const HeisenbergParams& p) {
    p.validate();
    TimedCircuit c;
    c.width = p.N;
    double theta = 2.0 * p.J * p.deltaT;
    auto ev = even_bonds(p.N);
    auto od = odd_bonds(p.N);
    int init = p.initQubit();

    auto push = [&](NativeGate g) { c.events.push_back(make_gate(g, "prep")); };

    if (p.K == 0) {
        // Just the basis-state preparation; negligible-error initialisation.
        NativeGate g = ry(init, kPi);
        g.noisy = false;
        push(g);
        return c;
    }

    for (int step = 0; step < p.K; ++step) {
        // XX layer: Ry(pi/2) basis change (first layer absorbs the Ry(pi)
        // state preparation on the excited site)
        for (int q = 0; q < p.N; ++q) {
            double a = kPi / 2.0;
            if (step == 0 && q == init) a += kPi;
            push(ry(q, a));
        }
        for (auto [a, b] : ev) push(rzz(a, b, theta));
        for (auto [a, b] : od) push(rzz(a, b, theta));
        for (int q = 0; q < p.N; ++q) push(ry(q, -kPi / 2.0));
        // YY layer
        for (int q = 0; q < p.N; ++q) push(rx(q, kPi / 2.0));
        for (auto [a, b] : ev) push(rzz(a, b, theta));
        for (auto [a, b] : od) push(rzz(a, b, theta));
        for (int q = 0; q < p.N; ++q) push(rx(q, -kPi / 2.0));
        // ZZ layer
        for (auto [a, b] : ev) push(rzz(a, b, theta));
        for (auto [a, b] : od) push(rzz(a, b, theta));
        // random-field layer (virtual)
        for (int q = 0; q < p.N; ++q) push(rz(q, 2.0 * p.h[q] * p.deltaT));
    }
    return c;
}

namespace {

Matrix dense_pauli_on(int N, int q, char p) {
    Matrix m = pauli_matrix(p);
    std::size_t dim = std::size_t(1) << N;
    Matrix full = Matrix::Identity(dim, dim);
    apply_on_array(full.data(), dim * dim, m, {q});
    return full;
}

Matrix layer_exponential(const Matrix& h, double dt) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector phases(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i)
        phases(i) = std::exp(-kI * dt * es.eigenvalues()(i));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

Vector ideal_state(const HeisenbergParams& p) {
    p.validate();
    if (p.N > 12) throw std::invalid_argument("ideal_state caps N at 12 (dense exponentials)");
    std::size_t dim = std::size_t(1) << p.N;
    // Bond layers; spin operators in the Pauli convention matching the
    // circuit's Rzz(2 J dt) angles.
    const char dirs[3] = {'X', 'Y', 'Z'};
    std::vector<Matrix> layers;
    for (char d : dirs) {
        Matrix h = Matrix::Zero(dim, dim);
        for (int j = 0; j < p.N; ++j) {
            int a = j, b = (j + 1) % p.N;
            h += p.J * (dense_pauli_on(p.N, a, d) * dense_pauli_on(p.N, b, d));
        }
        layers.push_back(layer_exponential(h, p.deltaT));
    }
    Matrix hf = Matrix::Zero(dim, dim);
    for (int j = 0; j < p.N; ++j) hf += p.h[j] * dense_pauli_on(p.N, j, 'Z');
    layers.push_back(layer_exponential(hf, p.deltaT));

    Vector psi = Vector::Zero(dim);
    psi(std::size_t(1) << p.initQubit()) = 1.0;
    for (int step = 0; step < p.K; ++step)
        for (const Matrix& u : layers) psi = u * psi;
    return psi;
}

}  // namespace vdnet
