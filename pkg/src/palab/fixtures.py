"""Named small algebras used across tests, scripts and the CLI."""

from __future__ import annotations

from .algebra import FiniteAlgebra, OperationTable, make_algebra


def e45() -> FiniteAlgebra:
    """The two-element right-cancellable algebra with n = 2 from the classic example.

    theta(i, j, k) = k if i != j else 1 - k; alpha_1 = 0; alpha_2(i, j) = [i == j];
    e_1 = 0, e_2 = 1.
    """
    theta = OperationTable.from_function(lambda i, j, k: k if i != j else 1 - k, 3, 2)
    a1 = OperationTable.from_function(lambda i, j: 0, 2, 2)
    a2 = OperationTable.from_function(lambda i, j: int(i == j), 2, 2)
    return make_algebra(2, 2, theta, [a1, a2], [0, 1])


def g2() -> FiniteAlgebra:
    """Z/2 with theta = alpha = XOR, e = 0."""
    xor = OperationTable.from_function(lambda a, b: a ^ b, 2, 2)
    return make_algebra(2, 1, xor, [xor], [0])


# column b of theta is an involution of {0, 1, 2}
_L3_COLUMNS = ((0, 1, 2), (1, 0, 2), (2, 1, 0))


def l3() -> FiniteAlgebra:
    """Three-element left semi-loop that is protomodular but not right-cancellable.

    theta(-, 0) is the identity, theta(-, 1) swaps 0 and 1, theta(-, 2) swaps
    0 and 2. Each column is an involution, so alpha has the same table.
    """
    t = OperationTable.from_function(lambda a, b: _L3_COLUMNS[b][a], 2, 3)
    return make_algebra(3, 1, t, [t], [0])


def one(n: int = 1) -> FiniteAlgebra:
    return make_algebra(1, n, [0], [[0]] * n, [0] * n)


FIXTURES = {"E45": e45, "G2": g2, "L3": l3, "ONE": one}
