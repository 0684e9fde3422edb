import pytest

from app.main import main
from app.utils.config import EXIT_FAIL, EXIT_PASS, EXIT_USAGE


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


# ---------------------------------------------------------------- validate
def test_validate_ok(capsys, diagram_path):
    code, out = _run(capsys, 'validate', diagram_path('trefoil_spine'))
    assert code == EXIT_PASS
    assert out == "validation: ok V=5 E=8 F=5\n"


def test_validate_reports_triple_used_edge(capsys, tmp_path, triple_edge_text):
    path = tmp_path / 'bad.txt'
    path.write_text(triple_edge_text, encoding='utf-8')
    code, out = _run(capsys, 'validate', path)
    assert code == EXIT_FAIL
    assert "validation: error edge-use: edge 4 used 3 times" in out.splitlines()


def test_validate_syntax_error(capsys, tmp_path):
    path = tmp_path / 'broken.txt'
    path.write_text("spine g=1\nloop 1: 1 x\n", encoding='utf-8')
    code, out = _run(capsys, 'validate', path)
    assert code == EXIT_FAIL
    assert out.startswith("validation: error syntax: line 2, column 11")


def test_validate_several_files_in_parallel(capsys, diagram_path):
    names = ['unknot', 'trefoil', 'hopf', 'standard_g2']
    code, out = _run(capsys, 'validate', '--jobs', 2, *(diagram_path(n) for n in names))
    assert code == EXIT_PASS
    lines = out.splitlines()
    assert len(lines) == 4
    assert lines[1] == f"{diagram_path('trefoil')}: validation: ok V=3 E=6 F=5"


def test_missing_file_is_usage_error(capsys, tmp_path):
    code, _out = _run(capsys, 'validate', tmp_path / 'nope.txt')
    assert code == EXIT_USAGE


def test_bad_jobs_is_usage_error(capsys, diagram_path):
    code, _out = _run(capsys, 'validate', '--jobs', 0, diagram_path('unknot'))
    assert code == EXIT_USAGE


def test_undecodable_file_is_usage_error(capsys, tmp_path, diagram_path):
    path = tmp_path / 'latin1.txt'
    path.write_bytes(b"spine g=1\nloop 1: 1 \xff\xfe\n")
    code, out = _run(capsys, 'validate', path)
    assert code == EXIT_USAGE
    assert out.startswith("error: ")
    assert "not UTF-8" in out

    code, out = _run(capsys, 'validate', '--jobs', 2, diagram_path('unknot'), path)
    assert code == EXIT_USAGE
    assert out.splitlines()[0] == f"{diagram_path('unknot')}: validation: ok V=1 E=1 F=2"
    assert out.splitlines()[1].startswith(f"{path}: error: ")


def test_undecodable_bundle_is_usage_error(capsys, tmp_path):
    path = tmp_path / 'bundle.txt'
    path.write_bytes(b"\xff\xfeHANDLECERT\n")
    code, out = _run(capsys, 'certify', path)
    assert code == EXIT_USAGE
    assert out == ''


def test_validate_reports_component_count(capsys, tmp_path):
    path = tmp_path / 'short.txt'
    path.write_text("link n=3\ncomponent 1: 1\n", encoding='utf-8')
    code, out = _run(capsys, 'validate', path)
    assert code == EXIT_FAIL
    assert "validation: error component-count: expected 3 components, found 1" in out.splitlines()


# ---------------------------------------------------------------- surface / linking
def test_surface(capsys, diagram_path):
    code, out = _run(capsys, 'surface', diagram_path('trefoil_spine'))
    assert code == EXIT_PASS
    assert "surface 1: disks=2 bands=3 chi=-1 genus=1 boundary=1" in out
    assert "spanning 1: boundary=C1 genus=1 paired=D1" in out


def test_surface_of_round_loops(capsys, diagram_path):
    code, out = _run(capsys, 'surface', diagram_path('standard_g2'))
    assert code == EXIT_PASS
    assert "surface 2: disks=1 bands=0 chi=1 genus=0 boundary=1" in out


def test_surface_needs_a_spine(capsys, diagram_path):
    code, _out = _run(capsys, 'surface', diagram_path('trefoil'))
    assert code == EXIT_USAGE


def test_linking(capsys, diagram_path):
    code, out = _run(capsys, 'linking', diagram_path('hopf'))
    assert code == EXIT_PASS
    assert out == "lk 1 2 = 1\n"
    code, out = _run(capsys, 'linking', diagram_path('hopf_spine'))
    assert out == "lk 1 2 = 1\n"


# ---------------------------------------------------------------- unknot / certify
def test_unknot_part2(capsys, diagram_path):
    code, out = _run(capsys, 'unknot', diagram_path('trefoil_spine'), '--mode', 'part2')
    assert code == EXIT_PASS
    assert "SURGERY" in out.splitlines()
    assert out.rstrip().endswith("bundle: pass mode=part2")


def test_unknot_standard_spine_has_empty_transcript(capsys, diagram_path):
    code, out = _run(capsys, 'unknot', diagram_path('standard_g2'))
    assert code == EXIT_PASS
    assert not any(line.startswith('move ') for line in out.splitlines())
    assert not any(line.startswith('surgery ') for line in out.splitlines())


def test_unknot_refuses_shared_system(capsys, diagram_path):
    code, out = _run(capsys, 'unknot', diagram_path('hopf_spine'), '--mode', 'part2')
    assert code == EXIT_FAIL
    assert out.startswith("error: refused: ")


def test_unknot_bad_mode_and_order(capsys, diagram_path):
    assert main(['unknot', str(diagram_path('trefoil_spine')), '--mode', 'part3']) == EXIT_USAGE
    assert main(['unknot', str(diagram_path('trefoil_spine')), '--order', '1,,2']) == EXIT_USAGE
    assert main(['unknot', str(diagram_path('trefoil_spine')), '--basepoint', '1-3']) == EXIT_USAGE
    capsys.readouterr()


def test_unknot_unknown_basepoint_crossing(capsys, diagram_path):
    code, out = _run(capsys, 'unknot', diagram_path('trefoil_spine'), '--basepoint', '1:9')
    assert code == EXIT_FAIL
    assert out.startswith("error: ")


def test_unknot_out_file_is_byte_stable(capsys, tmp_path, diagram_path):
    first, second = tmp_path / 'a.txt', tmp_path / 'b.txt'
    assert main(['unknot', str(diagram_path('hopf_spine')), '--out', str(first)]) == EXIT_PASS
    assert main(['unknot', str(diagram_path('hopf_spine')), '--out', str(second)]) == EXIT_PASS
    assert first.read_bytes() == second.read_bytes()
    assert capsys.readouterr().out == ''


def test_certify_round_trip(capsys, tmp_path, diagram_path):
    bundle = tmp_path / 'bundle.txt'
    spine = diagram_path('trefoil_spine')
    assert main(['unknot', str(spine), '--mode', 'part2', '--out', str(bundle)]) == EXIT_PASS
    code, out = _run(capsys, 'certify', bundle, '--input', spine)
    assert code == EXIT_PASS
    assert out == "certify: pass\n"

    bundle.write_text(bundle.read_text(encoding='utf-8').replace("framing=1/-1", "framing=2/3"),
                      encoding='utf-8')
    code, out = _run(capsys, 'certify', bundle)
    assert code == EXIT_FAIL
    assert out.startswith("certify: fail\nreason: ")


def test_dualize(capsys, diagram_path):
    code, out = _run(capsys, 'dualize', diagram_path('trefoil_spine'))
    assert code == EXIT_PASS
    assert out.splitlines()[-1] == "delta: 1 pass"


def test_no_subcommand_is_usage_error(capsys):
    assert main([]) == EXIT_USAGE
    capsys.readouterr()


@pytest.mark.parametrize('flag', ['-v', '-q'])
def test_verbosity_flags(capsys, diagram_path, flag):
    code, out = _run(capsys, flag, 'validate', diagram_path('unknot'))
    assert code == EXIT_PASS
    assert out == "validation: ok V=1 E=1 F=2\n"
