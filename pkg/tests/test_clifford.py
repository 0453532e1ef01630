from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kervaire.clifford import (
    CliffOp, ExteriorVector, K_op, SymMatrix, c_op, chat_op, hat_A, lemma1_kernel,
)
from kervaire.errors import (
    BasisNotOrthonormal, DegenerateGap, DimensionTooLarge, InvalidDimension, NotSymmetric,
    SingularMatrix,
)

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def rational_vectors(m):
    return st.lists(fractions, min_size=m, max_size=m)


def eye(m):
    return CliffOp.identity(m)


def inner(v, w):
    return sum(a * b for a, b in zip(v, w))


class TestActions:
    def test_c_on_one_dimension(self):
        assert c_op([1]).matrix.tolist() == [[0, -1], [1, 0]]

    def test_chat_on_one_dimension(self):
        assert chat_op([1]).matrix.tolist() == [[0, 1], [1, 0]]

    def test_zero_vector(self):
        assert c_op([0, 0, 0]).equals(CliffOp.zero(3))

    def test_integer_input_stays_integer(self):
        assert c_op([1, 2]).matrix.dtype == np.int64
        assert c_op([Fraction(1, 2), 1]).matrix.dtype == object
        assert c_op([0.5, 1.0]).matrix.dtype == np.float64

    def test_dimension_limits(self):
        with pytest.raises(InvalidDimension):
            c_op([])
        with pytest.raises(DimensionTooLarge):
            c_op([1] * 13)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 4).flatmap(lambda m: st.tuples(rational_vectors(m), rational_vectors(m))))
    def test_clifford_relations_are_exact(self, pair):
        v, w = pair
        m = len(v)
        cv, cw, hv, hw = c_op(v), c_op(w), chat_op(v), chat_op(w)
        assert (cv @ cw + cw @ cv).equals(eye(m) * (-2 * inner(v, w)))
        assert (hv @ hw + hw @ hv).equals(eye(m) * (2 * inner(v, w)))
        assert (cv @ hw + hw @ cv).equals(CliffOp.zero(m))
        assert cv.is_skew_adjoint()
        assert hv.is_self_adjoint()

    @pytest.mark.slow
    def test_square_in_six_dimensions(self):
        v = [Fraction(1, 2), -1, Fraction(2, 3), 0, 3, Fraction(-5, 4)]
        cv = c_op(v)
        assert (cv @ cv).equals(eye(6) * -inner(v, v))


class TestHatA:
    def test_zero(self):
        assert hat_A(np.zeros((2, 2))).norm() == 0.0

    def test_one_dimension(self):
        assert hat_A([[3]]).equals(c_op([1]) @ chat_op([1]) * 3)
        assert hat_A([[3]]).matrix.tolist() == [[-3, 0], [0, 3]]

    def test_self_adjoint(self):
        assert hat_A([[1, 2], [2, -1]]).is_self_adjoint()

    def test_frame_independence(self):
        rng = np.random.default_rng(3)
        a = np.array([[1.0, 0.5, -2.0], [0.5, 3.0, 0.0], [-2.0, 0.0, -1.0]])
        frame, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        assert hat_A(a, frame).equals(hat_A(a), tol=1e-9)

    def test_rejects_skewed_frame(self):
        with pytest.raises(BasisNotOrthonormal):
            hat_A([[1, 0], [0, 1]], np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_rejects_asymmetric(self):
        with pytest.raises(NotSymmetric):
            hat_A([[1, 2], [0, 1]])


class TestKernel:
    @pytest.mark.parametrize('m', [1, 3, 4])
    def test_identity(self, m):
        kernel, parity = lemma1_kernel(SymMatrix.diag([1] * m))
        assert kernel.terms(1e-12).keys() == {0}
        assert parity == 0

    @pytest.mark.parametrize('m', [1, 3, 4])
    def test_minus_identity(self, m):
        kernel, parity = lemma1_kernel(SymMatrix.diag([-1] * m))
        assert kernel.terms(1e-12).keys() == {(1 << m) - 1}
        assert parity == m % 2

    def test_diag_one_minus_one(self):
        kernel, parity = lemma1_kernel([[1, 0], [0, -1]])
        assert kernel.terms(1e-12).keys() == {0b10}
        assert parity == 1

    def test_diag_two_minus_three(self):
        k = K_op(SymMatrix.diag([2, -3]))
        values, vectors = np.linalg.eigh(k.matrix)
        assert abs(values[0]) < 1e-12
        assert values[1] > 1.0
        assert abs(abs(vectors[0b10, 0]) - 1) < 1e-12

    def test_mixed_signs(self):
        kernel, parity = lemma1_kernel(SymMatrix.diag([-2, 5, -1]))
        assert kernel.terms(1e-12).keys() == {0b101}
        assert parity == 0

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            lemma1_kernel([[1, 0], [0, 0]])
        with pytest.raises(SingularMatrix):
            K_op([[1, 1], [1, 1]])

    def test_degenerate_gap(self):
        with pytest.raises(DegenerateGap):
            lemma1_kernel(np.diag([1.0, 1e-8]))

    @pytest.mark.parametrize('seed', range(5))
    def test_random_matrix_agrees_with_dense_kernel(self, seed):
        rng = np.random.default_rng(seed)
        upper = rng.uniform(-3, 3, size=(4, 4))
        a = np.triu(upper) + np.triu(upper, 1).T
        kernel, parity = lemma1_kernel(a)
        values, vectors = np.linalg.eigh(K_op(a).matrix)
        assert values[0] > -1e-8 * np.abs(np.linalg.eigvalsh(a)).sum()
        assert abs(kernel.dot(ExteriorVector(4, vectors[:, 0]))) > 0.999
        assert parity == (0 if np.linalg.det(a) > 0 else 1)
        assert kernel.parity() == parity


class TestExteriorVector:
    def test_empty_wedge_is_one(self):
        assert ExteriorVector.wedge(np.zeros((2, 0))).terms() == {0: 1.0}

    def test_wedge_of_basis(self):
        v = ExteriorVector.wedge(np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]]))
        assert v.terms(1e-12) == {0b101: 1.0}
        assert v.parity() == 0

    def test_normalized(self):
        v = ExteriorVector.from_terms(2, {0: 3.0, 3: 4.0}).normalized()
        assert abs(v.norm() - 1) < 1e-12
