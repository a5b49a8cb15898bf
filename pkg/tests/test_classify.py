"""Density classification and its certificates."""

from fqlab.fpgroup import (
    abelianization,
    classify_density,
    has_infinite_cyclic_quotient,
    has_infinite_dihedral_quotient,
    parse_presentation,
    verify_cyclic_witness,
    verify_dihedral_witness,
)

Z = "gens: x\nrels:\n"
DINF = "gens: a b\nrels: a^2, b^2\n"
MODULAR = "gens: a b\nrels: a^2, b^3\n"
CRYSTAL = "gens: x y t\nrels: [x,y], t^4, t^-1 x t = y, t^-1 y t = x^-1\n"


def test_abelianization_examples():
    assert abelianization(parse_presentation(Z)).invariants == (0,)
    assert abelianization(parse_presentation(DINF)).invariants == (2, 2)
    assert abelianization(parse_presentation(MODULAR)).invariants == (1, 6)
    assert abelianization(parse_presentation(CRYSTAL)).invariants == (1, 2, 4)
    # trefoil knot group maps onto the integers
    trefoil = parse_presentation("gens: u v\nrels: u^2 = v^3\n")
    f = abelianization(trefoil)
    assert f.invariants == (1, 0)


def test_infinite_cyclic_detection():
    found, w = has_infinite_cyclic_quotient(parse_presentation(Z))
    assert found and w == (1,)
    trefoil = parse_presentation("gens: u v\nrels: u^2 = v^3\n")
    found, w = has_infinite_cyclic_quotient(trefoil)
    assert found
    assert verify_cyclic_witness(trefoil, w)
    assert sorted(abs(e) for e in w) == [2, 3]
    for text in (DINF, MODULAR, CRYSTAL):
        found, w = has_infinite_cyclic_quotient(parse_presentation(text))
        assert not found and w is None


def test_cyclic_witness_verification_rejects_junk():
    p = parse_presentation(Z)
    assert verify_cyclic_witness(p, (1,))
    assert not verify_cyclic_witness(p, (2,))   # not primitive
    assert not verify_cyclic_witness(p, (0,))
    assert not verify_cyclic_witness(p, (1, 1))  # wrong length
    trefoil = parse_presentation("gens: u v\nrels: u^2 = v^3\n")
    assert not verify_cyclic_witness(trefoil, (1, 1))  # kills no relator


def test_infinite_dihedral_detection():
    p = parse_presentation(DINF)
    found, data = has_infinite_dihedral_quotient(p)
    assert found
    table, gen, w = data
    assert verify_dihedral_witness(p, table, gen, w)
    for text in (MODULAR, CRYSTAL):
        found, data = has_infinite_dihedral_quotient(parse_presentation(text))
        assert not found and data is None
    # Z itself also surjects onto nothing dihedral (its only index-2
    # subgroup is 2Z, and the outer generator cannot negate it)
    found, _ = has_infinite_dihedral_quotient(parse_presentation(Z))
    assert not found


def test_d_infinity_times_finite_still_dihedral():
    # adding a commuting order-3 generator keeps the dihedral surjection
    p = parse_presentation("gens: a b c\nrels: a^2, b^2, c^3, [a,c], [b,c]\n")
    cls = classify_density(p)
    assert cls.tag == "infinite_dihedral"
    assert verify_dihedral_witness(
        p, cls.dihedral_table, cls.dihedral_generator, cls.dihedral_functional
    )


def test_classification_tags():
    assert classify_density(parse_presentation(Z)).tag == "infinite_cyclic"
    assert classify_density(parse_presentation(DINF)).tag == "infinite_dihedral"
    assert classify_density(parse_presentation(MODULAR)).tag == "density_zero"
    assert classify_density(parse_presentation(CRYSTAL)).tag == "density_zero"


def test_cyclic_takes_precedence_over_dihedral():
    # Z x D_inf surjects onto both; the cyclic tag wins
    p = parse_presentation("gens: a b z\nrels: a^2, b^2, [a,z], [b,z]\n")
    cls = classify_density(p)
    assert cls.tag == "infinite_cyclic"
    assert verify_cyclic_witness(p, cls.cyclic_witness)


def test_density_zero_reports_checked_count():
    cls = classify_density(parse_presentation(CRYSTAL))
    assert cls.tag == "density_zero"
    assert cls.index_two_checked == 3
    cls = classify_density(parse_presentation(MODULAR))
    assert cls.index_two_checked == 1


def test_density_numerator():
    assert classify_density(parse_presentation(Z)).density_numerator == 2
    assert classify_density(parse_presentation(DINF)).density_numerator == 1
    assert classify_density(parse_presentation(MODULAR)).density_numerator == 0


def test_finite_groups_are_density_zero():
    for text in (
        "gens: a\nrels: a^5\n",
        "gens: a b\nrels: a^2, b^4, (a b)^3\n",
        "gens: a b\nrels: a^4, a^2 = b^2, b^-1 a b = a^-1\n",
    ):
        assert classify_density(parse_presentation(text)).tag == "density_zero"


def test_dihedral_witness_verification_rejects_junk():
    p = parse_presentation(DINF)
    found, (table, gen, w) = has_infinite_dihedral_quotient(p)
    assert not verify_dihedral_witness(p, table, gen, tuple(2 * e for e in w))
    assert not verify_dihedral_witness(p, table, gen, w + (0,))
    other = parse_presentation(MODULAR)
    assert not verify_dihedral_witness(other, table, gen, w)
