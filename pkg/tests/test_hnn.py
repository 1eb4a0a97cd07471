"""Completion constructions and their injectivity certificates.

The certificate checkers themselves (pieces, folding, quotients) are
oracle-tested in their own files; here they serve as the oracle for the
constructions, with independent re-derivations where the certificate
could in principle disagree with a fresh computation.
"""

import itertools
import random

import pytest

from hnnembed.hnn import (
    PartialAscendingHNN,
    build_complex_pair,
    construct_embedding,
    construct_irreducible_embedding,
    generate_relator_family,
    validate,
)
from hnnembed.presentation import check_cprime
from hnnembed.stallings import rank, subgroup_core, wedge_extension_check
from hnnembed.subquotient import quotient
from hnnembed.words import (
    Alphabet,
    Word,
    cyclically_equal,
    exponent,
    is_proper_power,
    signed_letters,
)

C2 = Alphabet.of("c1", "c2")


def intro_example() -> PartialAscendingHNN:
    return PartialAscendingHNN.from_strings(
        ascending=[("a", " ".join(["a b c"] * 8)), ("b", " ".join(["a c"] * 9) + " b")],
        free=("c",),
    )


def test_validate_accepts_the_headline_input():
    assert validate(intro_example()) == []


def test_validate_diagnostics():
    bad = PartialAscendingHNN(("a",), ("b",), (Word.of(1, -1, 2),))
    assert any("not reduced" in d for d in validate(bad))
    uses_t = PartialAscendingHNN(("a",), ("b",), (Word.of(3),))
    assert any("stable letter" in d for d in validate(uses_t))
    foreign = PartialAscendingHNN(("a",), ("b",), (Word.of(9),))
    assert any("outside" in d for d in validate(foreign))
    empty = PartialAscendingHNN(("a",), ("b",), (Word.of(),))
    assert any("empty" in d for d in validate(empty))
    nothing = PartialAscendingHNN((), (), ())
    assert any("no generators" in d for d in validate(nothing))
    collapsing = PartialAscendingHNN(("a", "b"), (), (Word.of(1), Word.of(1)))
    assert any("freely generate" in d for d in validate(collapsing))


def test_structural_errors():
    with pytest.raises(ValueError, match="one image per"):
        PartialAscendingHNN(("a",), (), ())
    with pytest.raises(ValueError, match="collides"):
        PartialAscendingHNN(("t",), (), (Word.of(1),), stable="t")
    with pytest.raises(ValueError, match="invalid input"):
        construct_embedding(PartialAscendingHNN(("a",), (), (Word.of(1, -1, 2),)))


def test_presentation_of_partial_input():
    h = intro_example()
    p = h.presentation()
    assert p.alphabet.names == ("a", "b", "c", "t")
    assert len(p.relators) == 2
    assert p.alphabet.word_str(p.relators[0]).startswith("t a t'")
    assert exponent(p.relators[0]) == 1


def test_build_complex_pair_shapes():
    h = intro_example()
    spec = build_complex_pair(
        h,
        ("c1", "c2"),
        [h.images[0], h.images[1], Word.of(4), Word.of(4, 5), Word.of(5, 4)],
    )
    assert spec.parent.alphabet.names == ("a", "b", "c", "c1", "c2", "t")
    assert len(spec.parent.relators) == 5
    assert spec.parent.relator_names == ("a", "b", "c", "c1", "c2")
    assert spec.sub_relators == (0, 1)
    assert spec.sub_generators == frozenset({1, 2, 3, 6})


def test_family_is_verified_and_deterministic():
    fam = generate_relator_family(3, C2)
    assert len(fam) == 3
    assert check_cprime(fam, 1, 7).holds
    for w in fam:
        assert not is_proper_power(w)
        assert exponent(w) == 1
    for i, j in itertools.combinations(range(3), 2):
        assert not cyclically_equal(fam[i], fam[j])
    assert fam == generate_relator_family(3, C2)
    assert generate_relator_family(1, C2) and check_cprime(
        generate_relator_family(1, C2), 1, 7
    ).holds
    scaled = generate_relator_family(3, C2, start_scale=2)
    assert [len(w) for w in scaled] == [2 * len(w) - 32 for w in fam]


def test_family_preconditions():
    with pytest.raises(ValueError, match="count"):
        generate_relator_family(0, C2)
    with pytest.raises(ValueError, match="two-letter"):
        generate_relator_family(1, Alphabet.of("x"))


def test_construct_embedding_headline():
    res = construct_embedding(intro_example())
    assert res.new_names == ("c1", "c2")
    assert len(res.presentation.relators) == 5
    assert len(res.certificate.quotient_words) == 3
    assert res.certificate.all_true()
    assert res.certificate.irreducible is None


def test_construct_embedding_already_ascending():
    h = PartialAscendingHNN(("a",), (), (Word.of(1, 1),))
    res = construct_embedding(h)
    assert len(res.presentation.relators) == 3
    assert len(res.certificate.quotient_words) == 2
    assert res.certificate.all_true()


def test_construct_embedding_identity_image():
    h = PartialAscendingHNN(("a",), (), (Word.of(1),))
    res = construct_embedding(h)
    assert res.certificate.monomorphism
    assert res.certificate.all_true()


def test_construct_embedding_no_ascending_part():
    h = PartialAscendingHNN((), ("b",), ())
    res = construct_embedding(h)
    assert res.pair.sub_relators == ()
    assert res.certificate.all_true()


def test_new_generator_names_avoid_collisions():
    h = PartialAscendingHNN(("c1",), ("c2",), (Word.of(1),))
    res = construct_embedding(h)
    assert res.new_names == ("cc1", "cc2")
    assert res.certificate.all_true()


def test_round_trip_relators_verbatim():
    h = intro_example()
    own = h.presentation()
    for res in (construct_embedding(h), construct_irreducible_embedding(h)):
        g = res.presentation
        rendered = [g.alphabet.word_str(r) for r in g.relators]
        for r in own.relators:
            assert own.alphabet.word_str(r) in rendered


def test_certificate_soundness_against_fresh_quotient():
    res = construct_embedding(intro_example())
    q = quotient(res.pair)
    stored = res.certificate.quotient_words
    assert len(q.projected) == len(stored)
    for pr, w in zip(q.projected, stored):
        assert cyclically_equal(pr.word, w.inverse())
    assert check_cprime(list(stored), 1, 7).holds


def test_every_relator_has_exponent_one():
    res = construct_embedding(intro_example())
    for r in res.presentation.relators:
        assert exponent(r) == 1
    for w in res.certificate.quotient_words:
        assert exponent(w) == 1


def test_construction_is_deterministic():
    h = intro_example()
    assert construct_embedding(h) == construct_embedding(h)
    assert construct_irreducible_embedding(h) == construct_irreducible_embedding(h)


def digram_set(w: Word) -> set:
    return {(w[i], w[i + 1]) for i in range(len(w) - 1)}


def test_irreducible_headline():
    res = construct_irreducible_embedding(intro_example())
    cert = res.certificate
    assert cert.all_true()
    ev = cert.irreducible
    assert ev is not None
    assert ev.basepoint_degree <= ev.degree_bound == 4
    assert len(ev.x_labels) == 2
    # Independent digram coverage: every reduced pair over the 5-letter
    # extended alphabet occurs inside each new image.
    lets = signed_letters(5)
    for name in res.new_names + res.source.free:
        img = res.image_map()[name]
        have = digram_set(img)
        missing = [
            (p, q) for p in lets for q in lets if q != -p and (p, q) not in have
        ]
        assert missing == []


def test_irreducible_core_is_a_wedge():
    h = intro_example()
    res = construct_irreducible_embedding(h)
    gamma = subgroup_core(h.base_alphabet, h.images)
    nonstable = Alphabet(h.ascending + h.free + res.new_names)
    phi_core = subgroup_core(nonstable, list(res.images))
    assert rank(phi_core) == rank(gamma) + len(h.free) + 2
    assert res.certificate.irreducible.core_matches_wedge
    new_loops = list(res.images[len(h.ascending) :])
    assert wedge_extension_check(gamma.with_alphabet(nonstable), new_loops)


def test_irreducible_single_loop_trace():
    h = PartialAscendingHNN(("a",), ("b",), (Word.of(1),))
    res = construct_irreducible_embedding(h)
    ev = res.certificate.irreducible
    assert ev.x_labels == (2, -2)
    assert ev.basepoint_degree == 2
    assert res.certificate.all_true()


def test_irreducible_needs_a_free_generator():
    h = PartialAscendingHNN(("a",), (), (Word.of(1, 1),))
    with pytest.raises(ValueError, match="no free part"):
        construct_irreducible_embedding(h)


def test_irreducible_with_no_ascending_part():
    h = PartialAscendingHNN((), ("b",), ())
    res = construct_irreducible_embedding(h)
    ev = res.certificate.irreducible
    assert ev.degree_bound == 0
    assert ev.basepoint_degree == 0
    assert set(ev.x_labels) == {1, -1}
    assert res.certificate.all_true()


def test_random_valid_inputs_all_green():
    rng = random.Random(424242)
    done = 0
    while done < 6:
        ni = rng.randint(0, 3)
        nj = rng.randint(0 if ni else 1, 3)
        names_i = tuple(f"a{k+1}" for k in range(ni))
        names_j = tuple(f"b{k+1}" for k in range(nj))
        size = ni + nj
        images = []
        for _ in range(ni):
            n = rng.randint(1, 12)
            letters = []
            while len(letters) < n:
                x = rng.choice([-1, 1]) * rng.randint(1, size)
                if letters and letters[-1] == -x:
                    continue
                letters.append(x)
            images.append(Word.of(*letters))
        h = PartialAscendingHNN(names_i, names_j, tuple(images))
        if validate(h):
            continue
        done += 1
        res = construct_embedding(h)
        assert res.certificate.all_true()
        if nj:
            res2 = construct_irreducible_embedding(h)
            assert res2.certificate.all_true()
