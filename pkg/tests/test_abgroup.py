from rgrade.abgroup import (AbGroup, cokernel, elementary_divisors, integer_kernel, matmul, rank_mod2,
                            smith_normal_form, subquotient, two_adic_valuation)


def test_group_arithmetic_and_text():
    g = AbGroup.Z(2) + AbGroup.F2() + AbGroup(0, (2,))
    assert g == AbGroup(2, (1, 2))
    assert str(g) == "Z^2 + F2 + Z/4"
    assert str(AbGroup()) == "0"
    assert AbGroup.from_json(g.to_json()) == g
    assert g.f2_count == 1 and g.log2_torsion_order == 3


def test_torsion_is_sorted_and_validated():
    assert AbGroup(0, (3, 1)).torsion == (1, 3)
    for bad in [lambda: AbGroup(-1), lambda: AbGroup(0, (0,))]:
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("accepted an invalid group")


def test_two_local_cokernels():
    assert cokernel([[2, 0], [0, 3]], 2, 2) == AbGroup.F2()  # odd torsion is dropped
    assert cokernel([[4]], 1, 1) == AbGroup(0, (2,))
    assert cokernel([], 2, 0) == AbGroup.Z(2)
    assert two_adic_valuation(12) == 2 and two_adic_valuation(-8) == 3


def test_smith_normal_form_transforms():
    A = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    diag, U, V, Uinv = smith_normal_form(A)
    assert diag == [2, 6, 12]
    D = matmul(matmul(U, A), V)
    assert all(D[i][j] == (diag[i] if i == j else 0) for i in range(3) for j in range(3))
    assert matmul(U, Uinv) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert elementary_divisors(A) == diag


def test_kernels_and_subquotients():
    K = integer_kernel([[1, 1]], 1, 2)
    assert matmul([[1, 1]], K) == [[0]]
    # Z^2 / span(2e1, e2) = F2
    assert subquotient([[1, 0], [0, 1]], [[2, 0], [0, 1]], 2) == AbGroup.F2()
    assert rank_mod2([[1, 1], [1, 1]]) == 1
