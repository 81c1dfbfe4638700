"""Low-level numba kernels for statevector evolution.

Convention notes (pinned, tested):
  * qubit 0 is the most significant bit of the amplitude index, so the bit
    mask of qubit q on an n-qubit register is 1 << (n - 1 - q);
  * all parameterized rotations use the full-angle convention
    U(theta) = exp(-i * theta * P) with P a Pauli string, P^2 = I;
  * kernels mutate their state argument in place. Callers own copies.

A Pauli string is encoded by three numbers: `flip` (bit mask of qubits
carrying X or Y), `zmask` (bit mask of qubits carrying Y or Z) and `phase`
(the scalar i**n_Y). Then P|x> = phase * (-1)**popcount(x & zmask) |x ^ flip>.
"""

import numpy as np
from numba import njit

# gate kind codes shared with the circuit IR
KIND_RX = 0
KIND_RY = 1
KIND_RZ = 2
KIND_H = 3
KIND_CNOT = 4
KIND_CZ = 5
KIND_RP2 = 6  # two-qubit Pauli rotation exp(-i theta P0 x P1)


@njit(cache=True)
def _parity(v):
    v ^= v >> 32
    v ^= v >> 16
    v ^= v >> 8
    v ^= v >> 4
    v ^= v >> 2
    v ^= v >> 1
    return v & 1


@njit(cache=True)
def apply_rx(state, q, n, theta):
    c = np.cos(theta)
    s = np.sin(theta)
    stride = 1 << (n - 1 - q)
    dim = state.shape[0]
    for base in range(0, dim, 2 * stride):
        for off in range(stride):
            i0 = base + off
            i1 = i0 + stride
            a0 = state[i0]
            a1 = state[i1]
            state[i0] = c * a0 - 1j * s * a1
            state[i1] = -1j * s * a0 + c * a1


@njit(cache=True)
def apply_ry(state, q, n, theta):
    c = np.cos(theta)
    s = np.sin(theta)
    stride = 1 << (n - 1 - q)
    dim = state.shape[0]
    for base in range(0, dim, 2 * stride):
        for off in range(stride):
            i0 = base + off
            i1 = i0 + stride
            a0 = state[i0]
            a1 = state[i1]
            state[i0] = c * a0 - s * a1
            state[i1] = s * a0 + c * a1


@njit(cache=True)
def apply_rz(state, q, n, theta):
    em = np.cos(theta) - 1j * np.sin(theta)
    ep = np.conj(em)
    stride = 1 << (n - 1 - q)
    dim = state.shape[0]
    for base in range(0, dim, 2 * stride):
        for off in range(stride):
            i0 = base + off
            state[i0] = em * state[i0]
            state[i0 + stride] = ep * state[i0 + stride]


@njit(cache=True)
def apply_hadamard(state, q, n):
    r = 0.7071067811865476
    stride = 1 << (n - 1 - q)
    dim = state.shape[0]
    for base in range(0, dim, 2 * stride):
        for off in range(stride):
            i0 = base + off
            i1 = i0 + stride
            a0 = state[i0]
            a1 = state[i1]
            state[i0] = r * (a0 + a1)
            state[i1] = r * (a0 - a1)


@njit(cache=True)
def apply_cnot(state, control, target, n):
    cb = 1 << (n - 1 - control)
    tb = 1 << (n - 1 - target)
    dim = state.shape[0]
    for i in range(dim):
        if (i & cb) != 0 and (i & tb) == 0:
            j = i | tb
            tmp = state[i]
            state[i] = state[j]
            state[j] = tmp


@njit(cache=True)
def apply_cz(state, qa, qb, n):
    ab = 1 << (n - 1 - qa)
    bb = 1 << (n - 1 - qb)
    both = ab | bb
    dim = state.shape[0]
    for i in range(dim):
        if (i & both) == both:
            state[i] = -state[i]


@njit(cache=True)
def apply_pauli_rotation(state, flip, zmask, phase, theta):
    """exp(-i theta P) with P given by (flip, zmask, phase); in place."""
    c = np.cos(theta)
    s = np.sin(theta)
    dim = state.shape[0]
    if flip == 0:
        for x in range(dim):
            if _parity(x & zmask) == 0:
                state[x] = state[x] * (c - 1j * s * phase)
            else:
                state[x] = state[x] * (c + 1j * s * phase)
        return
    for x in range(dim):
        y = x ^ flip
        if x < y:
            sx = 1.0 - 2.0 * _parity(x & zmask)
            sy = 1.0 - 2.0 * _parity(y & zmask)
            u = state[x]
            v = state[y]
            state[x] = c * u - 1j * s * (phase * sy) * v
            state[y] = c * v - 1j * s * (phase * sx) * u


@njit(cache=True)
def apply_pauli_inplace(state, flip, zmask, phase):
    """state <- P state for the Pauli string (flip, zmask, phase)."""
    dim = state.shape[0]
    if flip == 0:
        for x in range(dim):
            sgn = 1.0 - 2.0 * _parity(x & zmask)
            state[x] = phase * sgn * state[x]
        return
    for x in range(dim):
        y = x ^ flip
        if x < y:
            sx = 1.0 - 2.0 * _parity(x & zmask)
            sy = 1.0 - 2.0 * _parity(y & zmask)
            u = state[x]
            state[x] = phase * sy * state[y]
            state[y] = phase * sx * u


@njit(cache=True)
def pauli_accumulate(out, inp, flip, zmask, phase, coeff):
    """out += coeff * P inp  (out and inp must be distinct buffers)."""
    dim = inp.shape[0]
    for x in range(dim):
        sgn = 1.0 - 2.0 * _parity(x & zmask)
        out[x ^ flip] += coeff * phase * sgn * inp[x]


@njit(cache=True)
def pauli_expectation(state, flip, zmask, phase):
    """<state| P |state> as a complex number."""
    dim = state.shape[0]
    acc = 0.0 + 0.0j
    for x in range(dim):
        sgn = 1.0 - 2.0 * _parity(x & zmask)
        acc += np.conj(state[x ^ flip]) * phase * sgn * state[x]
    return acc


@njit(cache=True)
def pauli_cross(bra, ket, flip, zmask, phase):
    """<bra| P |ket> as a complex number."""
    dim = ket.shape[0]
    acc = 0.0 + 0.0j
    for x in range(dim):
        sgn = 1.0 - 2.0 * _parity(x & zmask)
        acc += np.conj(bra[x ^ flip]) * phase * sgn * ket[x]
    return acc


@njit(cache=True)
def ham_apply(out, inp, flips, zmasks, phases, coeffs):
    """out = H inp for H = sum_t coeffs[t] * P_t."""
    out[:] = 0.0
    for t in range(coeffs.shape[0]):
        pauli_accumulate(out, inp, flips[t], zmasks[t], phases[t], coeffs[t])


@njit(cache=True)
def ham_expectation(state, flips, zmasks, phases, coeffs):
    acc = 0.0 + 0.0j
    for t in range(coeffs.shape[0]):
        acc += coeffs[t] * pauli_expectation(state, flips[t], zmasks[t], phases[t])
    return acc


@njit(cache=True)
def run_circuit(state, n, kinds, q0, q1, gflip, gzmask, gphase, thetas):
    """Apply the encoded gate list to `state` in order, in place."""
    for g in range(kinds.shape[0]):
        k = kinds[g]
        if k == KIND_RX:
            apply_rx(state, q0[g], n, thetas[g])
        elif k == KIND_RY:
            apply_ry(state, q0[g], n, thetas[g])
        elif k == KIND_RZ:
            apply_rz(state, q0[g], n, thetas[g])
        elif k == KIND_H:
            apply_hadamard(state, q0[g], n)
        elif k == KIND_CNOT:
            apply_cnot(state, q0[g], q1[g], n)
        elif k == KIND_CZ:
            apply_cz(state, q0[g], q1[g], n)
        else:
            apply_pauli_rotation(state, gflip[g], gzmask[g], gphase[g], thetas[g])


@njit(cache=True)
def _apply_gate_inverse(state, n, k, a, b, flip, zmask, phase, theta):
    if k == KIND_RX:
        apply_rx(state, a, n, -theta)
    elif k == KIND_RY:
        apply_ry(state, a, n, -theta)
    elif k == KIND_RZ:
        apply_rz(state, a, n, -theta)
    elif k == KIND_H:
        apply_hadamard(state, a, n)
    elif k == KIND_CNOT:
        apply_cnot(state, a, b, n)
    elif k == KIND_CZ:
        apply_cz(state, a, b, n)
    else:
        apply_pauli_rotation(state, flip, zmask, phase, -theta)


@njit(cache=True)
def shift_rule_sweep(avec, bvec, n, kinds, q0, q1, slots, gflip, gzmask, gphase,
                     thetas, grads):
    """Fill `grads` with the parameter-shift differences C(+pi/4) - C(-pi/4).

    For a Pauli generator the two shifted costs obey
        C(theta + pi/4 e_j) - C(theta - pi/4 e_j) = 2 Im <b_g| P_j |a_g>,
    where |a_g> is the state after gate g and |b_g> carries H conjugated by
    the gates following g. The identity is exact (R(+-pi/4) = (I -+ iP)/sqrt2),
    so one backward sweep reproduces every shifted-evaluation difference.
    On entry avec = U|0>, bvec = H U|0>; both are consumed.
    """
    for g in range(kinds.shape[0] - 1, -1, -1):
        j = slots[g]
        if j >= 0:
            ov = pauli_cross(bvec, avec, gflip[g], gzmask[g], gphase[g])
            grads[j] += 2.0 * ov.imag
        _apply_gate_inverse(avec, n, kinds[g], q0[g], q1[g],
                            gflip[g], gzmask[g], gphase[g], thetas[g])
        _apply_gate_inverse(bvec, n, kinds[g], q0[g], q1[g],
                            gflip[g], gzmask[g], gphase[g], thetas[g])


@njit(cache=True)
def depolarize_trajectory(state, n, kinds, q0, q1, gflip, gzmask, gphase,
                          thetas, p, uniforms):
    """One noise trajectory: after each gate, each touched wire suffers
    X/Y/Z with probability p/3 each. `uniforms` supplies the randomness,
    two entries per gate (second one unused for one-qubit gates)."""
    u_idx = 0
    for g in range(kinds.shape[0]):
        k = kinds[g]
        if k == KIND_RX:
            apply_rx(state, q0[g], n, thetas[g])
        elif k == KIND_RY:
            apply_ry(state, q0[g], n, thetas[g])
        elif k == KIND_RZ:
            apply_rz(state, q0[g], n, thetas[g])
        elif k == KIND_H:
            apply_hadamard(state, q0[g], n)
        elif k == KIND_CNOT:
            apply_cnot(state, q0[g], q1[g], n)
        elif k == KIND_CZ:
            apply_cz(state, q0[g], q1[g], n)
        else:
            apply_pauli_rotation(state, gflip[g], gzmask[g], gphase[g], thetas[g])
        nw = 1 if q1[g] < 0 else 2
        for w in range(nw):
            q = q0[g] if w == 0 else q1[g]
            u = uniforms[u_idx]
            u_idx += 1
            if u < p:
                bit = 1 << (n - 1 - q)
                which = int(u / p * 3.0)  # 0:X 1:Y else Z, uniform given u < p
                if which == 0:
                    apply_pauli_inplace(state, bit, 0, 1.0 + 0.0j)
                elif which == 1:
                    apply_pauli_inplace(state, bit, bit, 1.0j)
                else:
                    apply_pauli_inplace(state, 0, bit, 1.0 + 0.0j)
    return u_idx
