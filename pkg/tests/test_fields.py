import random
from fractions import Fraction

import pytest

from groupoid_growth.fields import (
    GF2,
    QQ,
    BitRowBasis,
    DimensionMismatch,
    PrimeField,
    RowBasis,
    SparseVector,
    parse_field,
)


def vec(entries, field=QQ, dim=None):
    d = dim if dim is not None else (max(entries) + 1 if entries else 1)
    return SparseVector(d, {i: field.from_int(c) for i, c in entries.items()}, field)


class TestFieldArithmetic:
    def test_rationals(self):
        assert QQ.add(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)
        assert QQ.inv(Fraction(2, 3)) == Fraction(3, 2)
        with pytest.raises(ZeroDivisionError):
            QQ.inv(Fraction(0))

    def test_prime_field(self):
        f7 = PrimeField(7)
        assert f7.mul(3, 5) == 1
        assert f7.inv(3) == 5
        assert f7.sub(2, 5) == 4

    def test_non_prime_rejected(self):
        with pytest.raises(ValueError):
            PrimeField(6)
        with pytest.raises(ValueError):
            PrimeField(1)

    def test_parse_field(self):
        assert parse_field("Q") == QQ
        assert parse_field("F2") == GF2
        assert parse_field("Fp:7") == PrimeField(7)
        with pytest.raises(ValueError):
            parse_field("R")


class TestSparseVector:
    def test_zero_entries_stripped(self):
        v = vec({0: 1, 1: 0}, dim=2)
        assert v.entries == {0: Fraction(1)}

    def test_index_bounds(self):
        with pytest.raises(IndexError):
            SparseVector(2, {3: Fraction(1)}, QQ)


class TestRowBasis:
    def test_reduce_empty_basis(self):
        basis = RowBasis(QQ, 2)
        v = vec({0: 1}, dim=2)
        assert basis.reduce_against(v) == v

    def test_reduce_scalar_multiple(self):
        basis = RowBasis(QQ, 2)
        basis.insert(vec({0: 1}, dim=2))
        assert basis.reduce_against(vec({0: 3}, dim=2)).is_zero()

    def test_reduce_f2_one_step(self):
        basis = RowBasis(GF2, 2)
        basis.insert(vec({0: 1, 1: 1}, GF2, dim=2))
        residue = basis.reduce_against(vec({0: 1}, GF2, dim=2))
        assert residue.entries == {1: 1}

    def test_insert_rank(self):
        basis = RowBasis(QQ, 2)
        assert basis.insert(vec({0: 1}, dim=2))
        assert basis.insert(vec({1: 1}, dim=2))
        assert basis.rank == 2

    def test_insert_duplicate(self):
        basis = RowBasis(QQ, 2)
        assert basis.insert(vec({0: 1, 1: 1}, dim=2))
        assert not basis.insert(vec({0: 1, 1: 1}, dim=2))
        assert basis.rank == 1

    def test_f2_dependent_triple(self):
        basis = RowBasis(GF2, 3)
        basis.insert(vec({0: 1, 1: 1}, GF2, dim=3))
        basis.insert(vec({1: 1, 2: 1}, GF2, dim=3))
        assert not basis.insert(vec({0: 1, 2: 1}, GF2, dim=3))
        assert basis.rank == 2

    def test_dimension_mismatch(self):
        basis = RowBasis(QQ, 2)
        with pytest.raises(DimensionMismatch):
            basis.insert(vec({0: 1}, dim=3))

    def test_rank_insertion_order_invariant(self):
        rng = random.Random(7)
        dim = 8
        vectors = [
            {i: rng.randint(0, 1) for i in range(dim)} for _ in range(12)
        ]
        ranks = set()
        for _ in range(5):
            rng.shuffle(vectors)
            basis = RowBasis(QQ, dim)
            for entries in vectors:
                basis.insert(vec(entries, dim=dim))
            ranks.add(basis.rank)
        assert len(ranks) == 1

    def test_rational_rank_at_least_modular(self):
        rng = random.Random(3)
        for _ in range(10):
            dim = 6
            vectors = [{i: rng.randint(0, 1) for i in range(dim)} for _ in range(8)]
            bq = RowBasis(QQ, dim)
            b2 = RowBasis(GF2, dim)
            for entries in vectors:
                bq.insert(vec(entries, dim=dim))
                b2.insert(vec(entries, GF2, dim=dim))
            assert bq.rank >= b2.rank

    def test_express_witness(self):
        rng = random.Random(11)
        dim = 6
        basis = RowBasis(QQ, dim)
        rows = []
        for _ in range(4):
            entries = {i: rng.randint(0, 3) for i in range(dim)}
            v = vec(entries, dim=dim)
            if basis.insert(v):
                rows.append(v)
        # A random combination must reduce to zero, and the witness must re-sum to v.
        coeffs = [Fraction(rng.randint(-3, 3)) for _ in rows]
        combo: dict = {}
        for c, row in zip(coeffs, rows):
            for i, x in enumerate([row.entries.get(j, Fraction(0)) for j in range(dim)]):
                combo[i] = combo.get(i, Fraction(0)) + c * x
        v = SparseVector(dim, combo, QQ)
        witness = basis.express(v)
        assert witness is not None
        resum: dict = {}
        for pivot, c in witness:
            for i, x in basis.rows[pivot].items():
                resum[i] = resum.get(i, Fraction(0)) + c * x
        assert SparseVector(dim, resum, QQ) == v

    def test_express_outside_span(self):
        basis = RowBasis(QQ, 2)
        basis.insert(vec({0: 1}, dim=2))
        assert basis.express(vec({1: 1}, dim=2)) is None


class TestBitRowBasis:
    def test_matches_row_basis(self):
        rng = random.Random(5)
        dim = 16
        masks = [rng.getrandbits(dim) for _ in range(20)]
        bits = BitRowBasis(dim)
        generic = RowBasis(GF2, dim)
        for m in masks:
            bits.insert(m)
            generic.insert(
                SparseVector(dim, {i: 1 for i in range(dim) if m >> i & 1}, GF2)
            )
        assert bits.rank == generic.rank

    def test_reduce_zero_in_span(self):
        b = BitRowBasis(4)
        b.insert(0b0011)
        b.insert(0b0110)
        assert b.reduce(0b0101) == 0

    def test_dim_guard(self):
        b = BitRowBasis(3)
        with pytest.raises(DimensionMismatch):
            b.insert(0b10000)
