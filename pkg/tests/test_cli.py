import json
import os

import pytest

from feeder.instance import CORPUS_DIR, corpus_path
from trop1 import EXIT_INVALID, EXIT_NO, EXIT_YES, main


def test_check_fig4(capsys):
    assert main(['check', corpus_path('fig4'), '--param', 'l1=1', '--param', 'l2=1']) == EXIT_YES
    assert main(['check', corpus_path('fig4'), '--param', 'l1=1', '--param', 'l2=3/2']) == EXIT_NO
    out = capsys.readouterr().out.splitlines()
    assert out == ['fig4: well-spaced', 'fig4: not well-spaced']


def test_check_fig5_reports_speyer(capsys, tmp_path):
    report = tmp_path / 'report.json'
    code = main(['check', corpus_path('fig5'), '--speyer', '--report', str(report)])
    assert code == EXIT_YES
    out = capsys.readouterr().out
    assert 'speyer: no' in out
    assert 'descent configuration: exists' in out
    data = json.loads(report.read_text())
    assert data['well_spaced'] and not data['speyer']
    assert data['superabundant']
    assert data['descent']['parts'] == [[-2, 1, 1]]


def test_check_single_character():
    assert main(['check', corpus_path('fig4'), '--param', 'l2=2', '--chi', '0,1']) == EXIT_NO
    assert main(['check', corpus_path('fig4'), '--param', 'l2=2', '--chi', '1,1']) == EXIT_YES


def test_check_invalid_input(tmp_path, capsys):
    bad = tmp_path / 'bad.json'
    bad.write_text('{"schema_version": 1,')
    assert main(['check', str(bad)]) == EXIT_INVALID
    assert 'error' in capsys.readouterr().err
    assert main(['check', corpus_path('fig5'), '--param', 'l7=1']) == EXIT_INVALID


def test_batch_check(monkeypatch, capsys, tmp_path):
    monkeypatch.setenv('TROP1_THREADS', '1')
    report = tmp_path / 'batch.json'
    assert main(['check', '--batch', CORPUS_DIR, '--report', str(report)]) == EXIT_NO
    out = capsys.readouterr().out.splitlines()
    assert 'fig3: not well-spaced' in out
    assert 'fig5: well-spaced' in out
    assert len(json.loads(report.read_text())) == 5


def test_moduli_summary(capsys, tmp_path):
    assert main(['moduli', corpus_path('fig5'), '--out', str(tmp_path)]) == EXIT_YES
    out = capsys.readouterr().out
    assert 'fig5: dim 5, expected 4' in out
    assert 'superabundant: yes' in out
    assert 'cells 3, arrows 2, maximal 2, pure True' in out
    assert os.path.exists(tmp_path / 'complex.json')
    assert os.path.exists(tmp_path / 'config.txt')


def one_type_instance(path):
    path.write_text(json.dumps({
        'schema_version': 1,
        'name': 'node',
        'ambient_dim': 1,
        'curve': {'vertices': [{'id': 'v', 'genus': 1}], 'edges': [],
                  'legs': [{'id': 't1', 'base': 'v'}, {'id': 't2', 'base': 'v'}]},
        'map': {'edges': {}, 'legs': {'t1': {'u': [1], 'w': 1}, 't2': {'u': [-1], 'w': 1}}},
    }))
    return str(path)


def test_export_of_a_one_type_complex(tmp_path):
    inst = one_type_instance(tmp_path / 'node.json')
    out = tmp_path / 'out'
    assert main(['export', inst, '--out', str(out)]) == EXIT_YES
    dot = (out / 'face_poset.dot').read_text()
    nodes = [l for l in dot.splitlines() if '[label=' in l and '->' not in l]
    assert len(nodes) == 1
    assert '->' not in dot


def test_export_is_deterministic(tmp_path):
    for run in ('a', 'b'):
        assert main(['export', corpus_path('fig5'), '--well-spaced', '--out', str(tmp_path / run)]) == EXIT_YES
    for name in ('complex.json', 'face_poset.dot'):
        assert (tmp_path / 'a' / name).read_text() == (tmp_path / 'b' / name).read_text()
    assert 'style=filled' in (tmp_path / 'a' / 'face_poset.dot').read_text()


def test_descent_search(capsys):
    assert main(['descent', '--search', '--parts', '3:1,1,-2']) == EXIT_YES
    assert json.loads(capsys.readouterr().out)['configuration_exists']
    assert main(['descent', '--search', '--parts', '2:1,-1']) == EXIT_NO
    assert main(['descent', '--search', '--parts', '2:2,-2;2:1,-1', '--c', '1,-8']) == EXIT_YES


def test_descent_instance_file(tmp_path, capsys):
    path = tmp_path / 'descent.json'
    path.write_text(json.dumps({'slopes': [[2, -2], [1, -1]], 'points': [['1', '-1'], ['1', '2']],
                                'constants': ['1', '-8']}))
    assert main(['descent', '--instance', str(path)]) == EXIT_YES
    result = json.loads(capsys.readouterr().out)
    assert result == {'b': ['-4', '-1/2'], 'descends': True}
    path.write_text(json.dumps({'slopes': [[1, -1]], 'points': [['1', '1']], 'constants': ['1']}))
    assert main(['descent', '--instance', str(path)]) == EXIT_INVALID


def test_parts_size_is_checked():
    with pytest.raises(SystemExit):
        main(['descent', '--search', '--parts', '3:1,-1'])


def test_corpus_listing(capsys, tmp_path):
    assert main(['corpus', '--write', str(tmp_path)]) == EXIT_YES
    assert capsys.readouterr().out.split() == ['fig1', 'fig2', 'fig3', 'fig4', 'fig5']
    assert sorted(os.listdir(tmp_path)) == ['fig1.json', 'fig2.json', 'fig3.json', 'fig4.json', 'fig5.json']
    assert main(['check', str(tmp_path / 'fig4.json')]) == EXIT_YES


def test_check_of_a_fan_labelled_map(fanned_fig5, tmp_path, capsys):
    report = tmp_path / 'report.json'
    assert main(['check', fanned_fig5, '--report', str(report)]) == EXIT_YES
    assert 'error' not in capsys.readouterr().err
    data = json.loads(report.read_text())
    assert data['well_spaced'] and data['superabundant']


def test_moduli_of_a_fan_labelled_map(fanned_fig5, capsys, tmp_path):
    target = tmp_path / 'nested' / 'fig5.json'
    assert main(['moduli', fanned_fig5, '--out', str(target)]) == EXIT_YES
    out = capsys.readouterr().out
    assert 'fig5: dim 4, expected 4' in out
    assert 'superabundant: yes' in out
    assert json.loads(target.read_text())['stats']['cells'] == 3
    assert os.path.exists(tmp_path / 'nested' / 'config.txt')


def test_malformed_thread_cap_is_invalid_input(monkeypatch, capsys):
    monkeypatch.setenv('TROP1_THREADS', 'many')
    assert main(['check', '--batch', CORPUS_DIR]) == EXIT_INVALID
    assert 'TROP1_THREADS' in capsys.readouterr().err
