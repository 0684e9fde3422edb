import pytest

from app.models.diagram import GaussCode
from app.services import diagram_service
from app.utils.errors import ComponentError, DiagramSemanticError, DiagramSyntaxError


# ---------------------------------------------------------------- parsing
def test_parse_round_spine(round_spine):
    assert round_spine.genus == 1
    assert round_spine.crossing_count == 0
    assert round_spine.normal_form


def test_parse_trefoil_spine(trefoil_spine):
    assert trefoil_spine.genus == 1
    assert trefoil_spine.crossing_count == 3
    assert trefoil_spine.normal_form
    assert [x.sign for x in trefoil_spine.crossings] == [1, 1, 1]


def test_arc_crossing_is_flagged(arc_spine):
    assert not arc_spine.normal_form
    assert [x.id for x in arc_spine.arc_crossings] == [1]


def test_triple_used_edge_is_semantic_error(triple_edge_text):
    with pytest.raises(DiagramSemanticError) as info:
        diagram_service.parse_spine(triple_edge_text)
    messages = [issue.message for issue in info.value.issues]
    assert "edge 4 used 3 times" in messages


def test_syntax_error_reports_line_and_column():
    with pytest.raises(DiagramSyntaxError) as info:
        diagram_service.read_diagram("spine g=1\nloop 1: 1 x\n")
    assert (info.value.line, info.value.column) == (2, 11)


def test_comments_and_blank_lines_are_ignored(load_text):
    text = "# leading comment\n\n" + load_text('trefoil') + "\n# trailing\n"
    assert diagram_service.parse_link(text) == diagram_service.parse_link(load_text('trefoil'))


def test_unknown_keyword_is_syntax_error():
    with pytest.raises(DiagramSyntaxError):
        diagram_service.read_diagram("link n=1\nloop 1: 1\n")


def test_wrong_kind_rejected(load_text):
    with pytest.raises(DiagramSemanticError):
        diagram_service.parse_spine(load_text('trefoil'))
    with pytest.raises(DiagramSemanticError):
        diagram_service.parse_link(load_text('trefoil_spine'))


def test_over_slot_a_is_reported():
    d = diagram_service.read_diagram("link n=1\ncomponent 1: 1 2\nX 1 1 2 2 1 over=a\n")
    report = diagram_service.validate(d)
    assert not report.ok
    assert 'over-slot' in [issue.code for issue in report.issues]


# ---------------------------------------------------------------- validation
def test_validate_unknot(unknot):
    report = diagram_service.validate(unknot)
    assert report.ok
    assert report.faces == 2
    assert report.euler == 2


def test_validate_trefoil_faces(trefoil):
    report = diagram_service.validate(trefoil)
    assert report.ok
    assert (report.vertices, report.edges, report.faces) == (3, 6, 5)


def test_validate_spines(trefoil_spine, standard_g2, hopf_spine):
    assert diagram_service.validate(trefoil_spine).lines() == ["validation: ok V=5 E=8 F=5"]
    assert diagram_service.validate(standard_g2).lines() == ["validation: ok V=3 E=4 F=3"]
    assert diagram_service.validate(hopf_spine).ok


def test_nonplanar_code_is_reported():
    d = diagram_service.read_diagram("link n=2\ncomponent 1: 1\ncomponent 2: 2\nX 1 1 2 1 2 over=d\n")
    report = diagram_service.validate(d)
    assert [issue.code for issue in report.issues] == ['nonplanar']


def test_wrong_arc_count_is_reported():
    d = diagram_service.read_diagram("spine g=2\nloop 1: 1\nloop 2: 2\narc 1: 3\nwedge: 3\n")
    codes = [issue.code for issue in diagram_service.validate(d).issues]
    assert 'arc-count' in codes


def test_component_count_must_match_header():
    d = diagram_service.read_diagram("link n=3\ncomponent 1: 1\n")
    report = diagram_service.validate(d)
    assert report.lines() == ["validation: error component-count: expected 3 components, found 1"]

    derived = diagram_service.link_from_gauss(diagram_service.gauss_code(d))
    assert derived.declared is None
    assert diagram_service.validate(derived).ok


def test_split_diagram_is_planar(unlink2):
    report = diagram_service.validate(unlink2)
    assert report.ok
    assert report.pieces == 2


# ---------------------------------------------------------------- writhe
def test_writhe(unknot, trefoil, figure8):
    assert diagram_service.writhe(unknot, 1) == 0
    assert diagram_service.writhe(trefoil, 1) == 3
    assert diagram_service.writhe(figure8, 1) == 0


def test_writhe_unknown_component(trefoil):
    with pytest.raises(ComponentError):
        diagram_service.writhe(trefoil, 2)


# ---------------------------------------------------------------- round trips
@pytest.mark.parametrize('name', ['unknot', 'trefoil', 'figure8', 'hopf', 'whitehead',
                                  'trefoil_spine', 'hopf_spine', 'standard_g2', 'arc_crossing_spine'])
def test_parse_serialize_parse(load_text, name):
    first = diagram_service.read_diagram(load_text(name))
    text = diagram_service.serialize(first)
    assert diagram_service.read_diagram(text) == first
    assert diagram_service.serialize(diagram_service.read_diagram(text)) == text


def test_gauss_round_trip_keeps_numbering(trefoil, trefoil_spine, hopf):
    assert diagram_service.link_from_gauss(diagram_service.gauss_code(trefoil)) == trefoil
    assert diagram_service.link_from_gauss(diagram_service.gauss_code(hopf)) == hopf
    rebuilt = diagram_service.spine_from_gauss(diagram_service.gauss_code(trefoil_spine))
    assert diagram_service.serialize(rebuilt) == diagram_service.serialize(trefoil_spine)


def test_trefoil_spine_gauss_code(trefoil_spine):
    code = diagram_service.gauss_code(trefoil_spine)
    assert code.components == (((1, True), (2, False), (3, True), (1, False), (2, True), (3, False)),)
    assert code.arcs == ((),)


def test_standard_spine_matches_file(standard_g2):
    assert diagram_service.serialize(diagram_service.standard_spine(2)) == diagram_service.serialize(standard_g2)


def test_wedge_order_survives_gauss_round_trip():
    text = ("spine g=3\nloop 1: 1\nloop 2: 2\nloop 3: 3\n"
            "arc 1: 4\narc 2: 5\narc 3: 6\nwedge: 5 4 6\n")
    spine = diagram_service.parse_spine(text)
    order = diagram_service.wedge_order(spine)
    assert order == (2, 1, 3)
    rebuilt = diagram_service.spine_from_gauss(diagram_service.gauss_code(spine), spine.sides, order)
    assert rebuilt.wedge == spine.wedge


def test_link_from_gauss_rejects_unbalanced_crossing():
    from app.utils.errors import MoveError
    code = GaussCode(components=(((1, True), (1, True)),), signs=((1, 1),))
    with pytest.raises(MoveError):
        diagram_service.link_from_gauss(code)


# ---------------------------------------------------------------- derived diagrams
def test_loop_link_of_hopf_spine_is_hopf(hopf_spine, hopf):
    assert diagram_service.serialize(diagram_service.loop_link(hopf_spine)) == diagram_service.serialize(hopf)


def test_sub_link(whitehead):
    assert diagram_service.sub_link(whitehead, [1]).crossing_count == 0
    assert diagram_service.sub_link(whitehead, [2]).crossing_count == 1
    with pytest.raises(ComponentError):
        diagram_service.sub_link(whitehead, [3])


def test_reverse_component_keeps_self_crossing_signs(trefoil):
    reversed_trefoil = diagram_service.reverse_component(trefoil, 1)
    assert diagram_service.writhe(reversed_trefoil, 1) == 3
    assert diagram_service.validate(reversed_trefoil).ok


def test_flip_crossings_negates_sign(trefoil):
    code = diagram_service.flip_crossings(diagram_service.gauss_code(trefoil), [1])
    flipped = diagram_service.link_from_gauss(code)
    assert flipped.crossing(1).sign == -1
    assert diagram_service.writhe(flipped, 1) == 1
    assert diagram_service.validate(flipped).ok
