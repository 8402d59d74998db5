#include "veeww/qstate.hpp"

#include <cmath>
#include <string>

#include "veeww/errors.hpp"

namespace veeww::qstate {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

AtomicKet AtomicKet::normalized(Complex plus, Complex minus) {
    const double norm = std::sqrt(std::norm(plus) + std::norm(minus));
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw DomainError("cannot normalize a zero or non-finite ket");
    }
    return AtomicKet(plus / norm, minus / norm);
}

bool AtomicKet::equals_up_to_phase(const AtomicKet& other, double tol) const {
    // |<a|b>|^2 == <a|a><b|b> exactly when b is a phase multiple of a.
    const Complex overlap = inner(*this, other);
    const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0};
    return std::abs(phase * plus_ - other.plus_) <= tol &&
           std::abs(phase * minus_ - other.minus_) <= tol;
}

Complex inner(const AtomicKet& bra, const AtomicKet& ket) noexcept {
    return std::conj(bra.plus()) * ket.plus() + std::conj(bra.minus()) * ket.minus();
}

Operator2 Operator2::from_entries(Complex a00, Complex a01, Complex a10,
                                  Complex a11) noexcept {
    Operator2 op;
    op.m_ = {a00, a01, a10, a11};
    return op;
}

Operator2 Operator2::hermitian(Complex a00, Complex a01, Complex a10, Complex a11) {
    constexpr double tol = 1e-12;
    if (std::abs(a00.imag()) > tol || std::abs(a11.imag()) > tol ||
        std::abs(a01 - std::conj(a10)) > tol) {
        throw DomainError("operator is not Hermitian");
    }
    Operator2 op = from_entries(a00, a01, a10, a11);
    op.hermitian_ = true;
    return op;
}

AtomicKet Operator2::apply(const AtomicKet& ket) const noexcept {
    return AtomicKet::raw(m_[0] * ket.plus() + m_[1] * ket.minus(),
                          m_[2] * ket.plus() + m_[3] * ket.minus());
}

Complex Operator2::matrix_element(const AtomicKet& bra, const AtomicKet& ket) const noexcept {
    return inner(bra, apply(ket));
}

Operator2 operator+(const Operator2& a, const Operator2& b) noexcept {
    Operator2 out;
    for (std::size_t i = 0; i < 4; ++i) out.m_[i] = a.m_[i] + b.m_[i];
    out.hermitian_ = a.hermitian_ && b.hermitian_;
    return out;
}

Operator2 operator*(Complex s, const Operator2& a) noexcept {
    Operator2 out;
    for (std::size_t i = 0; i < 4; ++i) out.m_[i] = s * a.m_[i];
    out.hermitian_ = a.hermitian_ && s.imag() == 0.0;
    return out;
}

AtomicKet plus_state() noexcept { return AtomicKet::raw(1.0, 0.0); }
AtomicKet minus_state() noexcept { return AtomicKet::raw(0.0, 1.0); }

AtomicKet symmetric_state() noexcept { return AtomicKet::raw(kInvSqrt2, kInvSqrt2); }

AtomicKet antisymmetric_state() noexcept { return AtomicKet::raw(kInvSqrt2, -kInvSqrt2); }

AtomicKet postselect_state(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= kHalfPi)) {
        throw DomainError("post-selection angle must lie in [0, pi/2], got " +
                          std::to_string(epsilon));
    }
    // Components built from cos/sin directly so eps = 0 is exact.
    const double c = std::cos(epsilon) * kInvSqrt2;
    const double s = std::sin(epsilon) * kInvSqrt2;
    return AtomicKet::raw(Complex{c, -s}, Complex{-c, -s});
}

Operator2 sigma_z() noexcept {
    static const Operator2 op = Operator2::hermitian(1.0, 0.0, 0.0, -1.0);
    return op;
}

WeakValueResult weak_value(const Operator2& obs, const AtomicKet& pre_state,
                           const AtomicKet& post_state) {
    const Complex overlap = inner(post_state, pre_state);
    if (std::abs(overlap) <= kOverlapFloor) {
        throw OrthogonalPrePost("pre- and post-selected states are orthogonal (|<f|i>| = " +
                                std::to_string(std::abs(overlap)) + ")");
    }
    return {obs.matrix_element(post_state, pre_state) / overlap, overlap};
}

}  // namespace veeww::qstate
