import random

import pytest

from app.models.diagram import GaussCode
from app.services import diagram_service, homology_service, seifert_service
from app.services.reidemeister_service import (
    R1Insert,
    R1Remove,
    R2Insert,
    R2Remove,
    R3Triangle,
    apply_reidemeister,
    insertion_sites,
    reducing_sites,
    search_trivial,
)
from app.utils.errors import MoveError


def _flipped_trefoil(trefoil):
    code = diagram_service.flip_crossings(diagram_service.gauss_code(trefoil), [1])
    return diagram_service.link_from_gauss(code)


# ---------------------------------------------------------------- R1
@pytest.mark.parametrize('sign', [1, -1])
def test_r1_insert_then_remove(unknot, sign):
    kinked = apply_reidemeister(unknot, 'R1', R1Insert(edge=1, sign=sign))
    assert kinked.crossing_count == 1
    assert diagram_service.validate(kinked).ok
    assert diagram_service.writhe(kinked, 1) == sign
    assert seifert_service.seifert_circles(kinked).count == 2

    back = apply_reidemeister(kinked, 'R1', R1Remove(crossing=1))
    assert diagram_service.serialize(back) == diagram_service.serialize(unknot)


def test_r1_remove_needs_a_kink(trefoil):
    with pytest.raises(MoveError):
        apply_reidemeister(trefoil, 'R1', R1Remove(crossing=1))


def test_move_name_must_match_site(unknot):
    with pytest.raises(MoveError):
        apply_reidemeister(unknot, 'R2', R1Insert(edge=1))


# ---------------------------------------------------------------- R2
def test_r2_insert_then_remove_on_hopf(hopf):
    pushed = apply_reidemeister(hopf, 'R2', R2Insert(over=(1, 1), under=(4, 1)))
    assert pushed.crossing_count == 4
    report = diagram_service.validate(pushed)
    assert report.ok
    assert report.faces == 6
    assert homology_service.linking_number(pushed, 1, 2) == 1

    back = apply_reidemeister(pushed, 'R2', R2Remove(first=3, second=4))
    assert diagram_service.serialize(back) == diagram_service.serialize(hopf)


def test_r2_insert_against_the_strand_direction(hopf):
    pushed = apply_reidemeister(hopf, 'R2', R2Insert(over=(2, 1), under=(4, -1)))
    report = diagram_service.validate(pushed)
    assert report.ok
    assert report.faces == 6
    assert R2Remove(first=3, second=4) in reducing_sites(pushed)


def test_r2_insert_between_split_circles(unlink2):
    pushed = apply_reidemeister(unlink2, 'R2', R2Insert(over=(1, 1), under=(2, 1)))
    assert pushed.crossing_count == 2
    assert diagram_service.validate(pushed).ok
    assert homology_service.linking_number(pushed, 1, 2) == 0
    back = apply_reidemeister(pushed, 'R2', R2Remove(first=1, second=2))
    assert back.crossing_count == 0


def test_r2_insert_needs_a_common_face(hopf):
    with pytest.raises(MoveError):
        apply_reidemeister(hopf, 'R2', R2Insert(over=(1, 1), under=(2, 1)))


def test_r2_remove_rejects_equal_signs(trefoil):
    with pytest.raises(MoveError):
        apply_reidemeister(trefoil, 'R2', R2Remove(first=1, second=2))


# ---------------------------------------------------------------- R3
def test_r3_on_alternating_triangle_is_rejected(trefoil):
    with pytest.raises(MoveError):
        apply_reidemeister(trefoil, 'R3', R3Triangle(edges=(1, 3, 5)))


def test_r3_on_flipped_trefoil(trefoil):
    flipped = _flipped_trefoil(trefoil)
    moved = apply_reidemeister(flipped, 'R3', R3Triangle(edges=(1, 3, 5)))
    assert moved.crossing_count == 3
    assert diagram_service.validate(moved).ok
    assert diagram_service.writhe(moved, 1) == diagram_service.writhe(flipped, 1) == 1


def test_braid_like_r3_keeps_seifert_circle_count():
    # closure of the braid s1 s2 s1
    braid = diagram_service.link_from_gauss(GaussCode(
        components=(((1, True), (2, True), (2, False), (3, False)), ((1, False), (3, True))),
        signs=((1, 1), (2, 1), (3, 1)),
    ))
    assert diagram_service.validate(braid).ok
    triangles = [site for site in reducing_sites(braid) if isinstance(site, R3Triangle)]
    assert triangles
    before = seifert_service.seifert_circles(braid).count
    moved = apply_reidemeister(braid, 'R3', triangles[0])
    assert diagram_service.validate(moved).ok
    assert seifert_service.seifert_circles(moved).count == before == 3


# ---------------------------------------------------------------- random sequences
def _walk(d, rng, steps, cap=None):
    """Yield the diagram after each random move; past cap crossings, reduce when possible."""
    for _ in range(steps):
        crowded = cap is not None and d.crossing_count >= cap
        if d.crossing_count and (crowded or rng.random() < 0.4):
            sites = reducing_sites(d)
            if sites:
                site = rng.choice(sites)
                d = apply_reidemeister(d, site.move, site)
                yield d
                continue
        site = rng.choice(insertion_sites(d))
        d = apply_reidemeister(d, site.move, site)
        yield d


def _random_walk(d, rng, steps):
    for d in _walk(d, rng, steps):
        pass
    return d


def _grow(d, rng, limit):
    """Insertions only, up to a random crossing count of at most limit."""
    target = rng.randint(d.crossing_count, limit)
    while d.crossing_count < target:
        sites = insertion_sites(d)
        if d.crossing_count + 2 > limit:
            sites = [site for site in sites if isinstance(site, R1Insert)]
        site = rng.choice(sites)
        d = apply_reidemeister(d, site.move, site)
    return d


@pytest.mark.parametrize('seed', range(8))
def test_linking_numbers_survive_random_moves(hopf, whitehead, seed):
    rng = random.Random(seed)
    for link in (hopf, whitehead):
        moved = _random_walk(link, rng, 5)
        assert diagram_service.validate(moved).ok
        assert homology_service.linking_number(moved, 1, 2) == homology_service.linking_number(link, 1, 2)


@pytest.mark.parametrize('seed', range(5))
def test_surface_counts_stay_consistent_under_random_moves(trefoil, seed):
    moved = _random_walk(trefoil, random.Random(100 + seed), 4)
    circles = seifert_service.seifert_circles(moved)
    surface = seifert_service.build_surface(moved, circles)
    assert surface.chi == circles.count - moved.crossing_count
    assert surface.genus >= 0


@pytest.mark.slow
@pytest.mark.parametrize('seed', range(50))
def test_linking_number_after_every_move(hopf, whitehead, unlink2, seed):
    bases = [hopf, whitehead, unlink2, diagram_service.reverse_component(hopf, 2)]
    base = bases[seed % len(bases)]
    expected = homology_service.linking_number(base, 1, 2)
    rng = random.Random(1000 + seed)
    start = _grow(base, rng, 8)
    for _sequence in range(4):
        for moved in _walk(start, rng, 15, cap=14):
            assert homology_service.linking_number(moved, 1, 2) == expected
        assert diagram_service.validate(moved).ok


@pytest.mark.slow
def test_random_diagrams_read_validate_write(unknot, trefoil, figure8, hopf, whitehead, unlink2):
    rng = random.Random(7)
    bases = [unknot, trefoil, figure8, hopf, whitehead, unlink2]
    for _ in range(200):
        d = _grow(rng.choice(bases), rng, 30)
        assert d.crossing_count <= 30
        text = diagram_service.serialize(d)
        back = diagram_service.read_diagram(text)
        assert diagram_service.validate(back).ok
        assert diagram_service.serialize(back) == text

        circles = seifert_service.seifert_circles(back)
        surface = seifert_service.build_surface(back, circles)
        assert surface.chi == circles.count - back.crossing_count
        assert surface.genus >= 0


# ---------------------------------------------------------------- triviality search
def test_search_finds_unknot_in_flipped_trefoil(trefoil):
    assert search_trivial(_flipped_trefoil(trefoil))


def test_search_gives_up_on_trefoil(trefoil):
    assert not search_trivial(trefoil)


def test_search_on_crossingless_diagram(unknot, unlink2):
    assert search_trivial(unknot)
    assert search_trivial(unlink2)
