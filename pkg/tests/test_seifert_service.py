import pytest

from app.services import diagram_service, seifert_service
from app.utils.errors import ComponentError, NormalFormError


def test_circle_counts(unknot, trefoil, hopf, figure8):
    assert seifert_service.seifert_circles(unknot).count == 1
    assert seifert_service.seifert_circles(trefoil).count == 2
    assert seifert_service.seifert_circles(hopf).count == 2
    assert seifert_service.seifert_circles(figure8).count == 3


def test_trefoil_circles_partition_edges(trefoil):
    circles = seifert_service.seifert_circles(trefoil)
    assert sorted(map(sorted, circles.circles)) == [[1, 3, 5], [2, 4, 6]]


@pytest.mark.parametrize('name, chi, genus, boundary', [
    ('unknot', 1, 0, 1),
    ('trefoil', -1, 1, 1),
    ('figure8', -1, 1, 1),
    ('hopf', 0, 0, 2),
])
def test_surface_of_knots_and_links(request, name, chi, genus, boundary):
    surface = seifert_service.surface_of(request.getfixturevalue(name))
    assert (surface.chi, surface.genus, surface.boundary) == (chi, genus, boundary)


def test_split_link_surface(unlink2):
    surface = seifert_service.surface_of(unlink2)
    assert surface.pieces == 2
    assert surface.genus == 0
    assert surface.chi == 2


def test_reversing_the_only_component_keeps_the_surface(trefoil):
    surface = seifert_service.surface_of(trefoil, orientations=[-1])
    assert surface.chi == -1
    assert surface.genus == 1


def test_orientation_must_be_plus_or_minus_one(trefoil, hopf):
    with pytest.raises(ComponentError):
        seifert_service.seifert_circles(trefoil, orientations=[0])
    with pytest.raises(ComponentError):
        seifert_service.seifert_circles(hopf, orientations=[1])


def test_reversing_a_hopf_component_changes_band_signs(hopf):
    surface = seifert_service.surface_of(hopf, orientations=[1, -1])
    assert {sign for _cid, sign in surface.bands} == {-1}
    assert surface.genus == 0


def test_circle_set_from_another_diagram_is_rejected(trefoil, hopf):
    with pytest.raises(ComponentError):
        seifert_service.build_surface(trefoil, seifert_service.seifert_circles(hopf))


# ---------------------------------------------------------------- spine systems
def test_round_spine_bounds_a_disk(round_spine):
    system = seifert_service.spine_seifert_system(round_spine)
    assert system.genus == 1
    assert system.surfaces[0].genus == 0
    assert system.surfaces[0].chi == 1
    assert system.completely_disjoint


def test_trefoil_spine_surface(trefoil_spine):
    system = seifert_service.spine_seifert_system(trefoil_spine)
    assert system.lines() == [
        "surface 1: disks=2 bands=3 chi=-1 genus=1 boundary=1",
        "disjoint: completely=true shared_disks=- shared_bands=-",
    ]


def test_standard_spine_system_is_disjoint(standard_g2):
    system = seifert_service.spine_seifert_system(standard_g2)
    assert [s.genus for s in system.surfaces] == [0, 0]
    assert system.completely_disjoint


def test_linked_loops_share_bands(hopf_spine):
    system = seifert_service.spine_seifert_system(hopf_spine)
    assert not system.completely_disjoint
    assert system.shared_bands == (1, 2)
    assert [s.genus for s in system.surfaces] == [0, 0]


def test_spine_system_needs_normal_form(arc_spine):
    with pytest.raises(NormalFormError):
        seifert_service.spine_seifert_system(arc_spine)


def test_system_after_arc_exchange(arc_spine):
    from app.services.unknotting_service import exchange_arc_crossings
    normal, _moves = exchange_arc_crossings(arc_spine)
    system = seifert_service.spine_seifert_system(normal)
    assert system.surfaces[0].genus == 0
    assert system.surfaces[0].chi == 1


def test_restrict_to_exterior(trefoil_spine, standard_g2):
    system = seifert_service.spine_seifert_system(trefoil_spine)
    spanning = seifert_service.restrict_to_exterior(system, 1)
    assert spanning.lines() == ["spanning 1: boundary=C1 genus=1 paired=D1"]
    assert seifert_service.restrict_to_exterior(
        seifert_service.spine_seifert_system(standard_g2), 2).genera == (0, 0)


def test_restrict_to_exterior_checks_genus(trefoil_spine):
    system = seifert_service.spine_seifert_system(trefoil_spine)
    with pytest.raises(ComponentError):
        seifert_service.restrict_to_exterior(system, 2)


def test_loop_link_surface_matches_system(trefoil_spine):
    loops = diagram_service.loop_link(trefoil_spine)
    whole = seifert_service.surface_of(loops)
    per_loop = seifert_service.spine_seifert_system(trefoil_spine).surfaces[0]
    assert (whole.chi, whole.genus, whole.boundary) == (per_loop.chi, per_loop.genus, per_loop.boundary)


def test_surface_bands_follow_crossings(trefoil):
    surface = seifert_service.surface_of(trefoil)
    assert surface.band_ids == [1, 2, 3]
    assert surface.bands == ((1, 1), (2, 1), (3, 1))
