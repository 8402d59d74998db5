#pragma once

// State and operator algebra on the excited doublet {|+>, |->} of the V atom.
//
// Phase convention: the post-selected state is
//   |f(eps)> = (e^{-i eps}|+> - e^{+i eps}|->) / sqrt(2),
// so its dual carries the conjugated phases and <f|S> = +i sin(eps).

#include <array>

#include "veeww/model.hpp"

namespace veeww::qstate {

/// |<post|pre>| at or below this is treated as exact orthogonality.
inline constexpr double kOverlapFloor = 1e-12;

class AtomicKet {
public:
    /// Normalizing constructor. Throws DomainError for the zero vector.
    static AtomicKet normalized(Complex plus, Complex minus);
    /// Stores the amplitudes verbatim; normalization is the caller's problem.
    static AtomicKet raw(Complex plus, Complex minus) noexcept {
        return AtomicKet(plus, minus);
    }

    Complex plus() const noexcept { return plus_; }
    Complex minus() const noexcept { return minus_; }
    double norm_squared() const noexcept {
        return std::norm(plus_) + std::norm(minus_);
    }

    /// True when the kets agree up to a global phase factor.
    bool equals_up_to_phase(const AtomicKet& other, double tol = 1e-12) const;

    friend bool operator==(const AtomicKet&, const AtomicKet&) = default;

private:
    AtomicKet(Complex plus, Complex minus) noexcept : plus_(plus), minus_(minus) {}

    Complex plus_;
    Complex minus_;
};

/// <bra|ket>, antilinear in the first argument.
Complex inner(const AtomicKet& bra, const AtomicKet& ket) noexcept;

/// 2x2 operator in the {|+>, |->} basis, row-major.
class Operator2 {
public:
    static Operator2 from_entries(Complex a00, Complex a01, Complex a10,
                                  Complex a11) noexcept;
    /// Validates self-adjointness to 1e-12 and sets the Hermitian flag.
    static Operator2 hermitian(Complex a00, Complex a01, Complex a10,
                               Complex a11);

    Complex operator()(int row, int col) const noexcept { return m_[2 * row + col]; }
    bool is_hermitian() const noexcept { return hermitian_; }

    /// Un-normalized image O|ket>.
    AtomicKet apply(const AtomicKet& ket) const noexcept;
    /// <bra|O|ket>.
    Complex matrix_element(const AtomicKet& bra, const AtomicKet& ket) const noexcept;

    friend Operator2 operator+(const Operator2& a, const Operator2& b) noexcept;
    friend Operator2 operator*(Complex s, const Operator2& a) noexcept;

private:
    std::array<Complex, 4> m_{};
    bool hermitian_ = false;
};

struct WeakValueResult {
    Complex value;    ///< <f|O|i> / <f|i>
    Complex overlap;  ///< <f|i>
};

AtomicKet plus_state() noexcept;
AtomicKet minus_state() noexcept;
/// (|+> + |->)/sqrt(2)
AtomicKet symmetric_state() noexcept;
/// (|+> - |->)/sqrt(2)
AtomicKet antisymmetric_state() noexcept;
/// The eps-rotated detection state; eps in [0, pi/2] else DomainError.
/// eps = 0 reproduces antisymmetric_state() bit for bit.
AtomicKet postselect_state(double epsilon);

/// diag(+1, -1)
Operator2 sigma_z() noexcept;

/// Throws OrthogonalPrePost when |<post|pre>| <= kOverlapFloor.
WeakValueResult weak_value(const Operator2& obs, const AtomicKet& pre_state,
                           const AtomicKet& post_state);

}  // namespace veeww::qstate
