"""On-disk formats: topology JSON, trace CSVs, summary documents."""

import json
import math

import numpy as np
import pytest

from ratagg import (
    DdnumConfig,
    SimConfig,
    TopologyError,
    TopologyFormatError,
    run_afra,
    run_ddnum,
)
from ratagg.fileio import (
    AFRA_TRACE_HEADER,
    DDNUM_TRACE_HEADER,
    jsonable,
    load_topology,
    save_topology,
    summary_text,
    write_afra_trace,
    write_ddnum_trace,
    write_summary,
)


def test_topology_roundtrip(tmp_path, random_topo):
    path = tmp_path / "topo.json"
    save_topology(random_topo, path)
    back = load_topology(path)
    np.testing.assert_array_equal(back.rates, random_topo.rates)
    np.testing.assert_array_equal(back.weights, random_topo.weights)
    assert back.bs_tech == random_topo.bs_tech


def test_topology_document_shape(tmp_path, embedded_topo):
    path = tmp_path / "topo.json"
    save_topology(embedded_topo, path)
    doc = json.loads(path.read_text())
    assert [c["id"] for c in doc["clients"]] == [0, 1, 2]
    assert all("weight" in c for c in doc["clients"])
    assert [b["tech"] for b in doc["bss"]] == ["wifi", "cellular"]
    assert doc["rates"] == [[10.0, 4.0], [10.0, 0.0], [5.0, 8.0]]


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("rates"),
        lambda d: d["clients"].pop(),  # id gap
        lambda d: d["clients"][0].update(id=5),
        lambda d: d["clients"][0].pop("weight"),
        lambda d: d["bss"][0].update(id=9),
        lambda d: d["rates"].pop(),
        lambda d: d["rates"][0].pop(),
        lambda d: d["rates"][0].__setitem__(0, "fast"),
        lambda d: d.update(rates="nope"),
    ],
)
def test_malformed_topology_rejected(tmp_path, embedded_topo, mutate):
    path = tmp_path / "topo.json"
    save_topology(embedded_topo, path)
    doc = json.loads(path.read_text())
    mutate(doc)
    path.write_text(json.dumps(doc))
    with pytest.raises(TopologyFormatError):
        load_topology(path)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d["clients"][0].update(weight=-1.0),
        lambda d: d["rates"][0].__setitem__(0, -3.0),
        lambda d: d["rates"].__setitem__(1, [0.0, 0.0]),  # client 1 stranded
    ],
)
def test_semantically_broken_topology_rejected(tmp_path, embedded_topo, mutate):
    """Structurally fine but invalid networks are still refused on load."""
    path = tmp_path / "topo.json"
    save_topology(embedded_topo, path)
    doc = json.loads(path.read_text())
    mutate(doc)
    path.write_text(json.dumps(doc))
    with pytest.raises(TopologyError):
        load_topology(path)


def test_missing_tech_defaults_to_unknown(tmp_path, embedded_topo):
    path = tmp_path / "topo.json"
    save_topology(embedded_topo, path)
    doc = json.loads(path.read_text())
    doc["bss"][0].pop("tech")
    path.write_text(json.dumps(doc))
    assert load_topology(path).bs_tech == ("unknown", "cellular")


def test_topology_rejects_non_json(tmp_path):
    path = tmp_path / "topo.json"
    path.write_text("{[")
    with pytest.raises(TopologyFormatError):
        load_topology(path)


def test_afra_trace_format(tmp_path, embedded_topo):
    result = run_afra(embedded_topo, SimConfig(epsilon=0.05, seed=1))
    path = tmp_path / "trace.csv"
    write_afra_trace(result.state.trace, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == AFRA_TRACE_HEADER
    assert len(lines) == 1 + len(result.state.trace)
    first = lines[1].split(",")
    assert first[0] == "1"
    assert first[2] in ("true", "false")
    # cumulative message column is non-decreasing
    cums = [int(row.split(",")[-1]) for row in lines[1:]]
    assert cums == sorted(cums)
    assert cums[-1] == result.summary.total_messages
    # floats carry enough digits to reconstruct the run
    assert float(first[4]) == pytest.approx(result.state.trace[0].potential_after, rel=1e-11)


def test_ddnum_trace_format(tmp_path, embedded_topo):
    res = run_ddnum(
        embedded_topo, DdnumConfig(gamma=0.05, target_potential=1e18, max_iterations=4)
    )
    path = tmp_path / "trace.csv"
    write_ddnum_trace(res.trace, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == DDNUM_TRACE_HEADER
    assert [int(r.split(",")[0]) for r in lines[1:]] == [1, 2, 3, 4]


def test_summary_bytes_are_stable(tmp_path):
    doc = {"b": 1.5, "a": [1, 2], "nested": {"z": True, "y": None}}
    p1, p2 = tmp_path / "s1.json", tmp_path / "s2.json"
    write_summary(doc, p1)
    write_summary(dict(reversed(doc.items())), p2)  # insertion order must not matter
    assert p1.read_bytes() == p2.read_bytes()
    assert p1.read_bytes().endswith(b"\n")
    assert summary_text(doc) == summary_text(dict(reversed(doc.items())))


def test_jsonable_handles_numpy_and_sentinels():
    assert jsonable(np.float64(1.5)) == 1.5
    assert jsonable(np.int32(4)) == 4
    assert jsonable(np.bool_(True)) is True
    assert jsonable(True) is True
    assert jsonable(float("nan")) is None
    assert jsonable(float("-inf")) is None
    assert jsonable(np.array([1.0, 2.0])) == [1.0, 2.0]
    doc = jsonable({"x": np.arange(3), "ok": np.bool_(False)})
    assert json.dumps(doc) == '{"x": [0, 1, 2], "ok": false}'


def test_jsonable_keeps_finite_floats_exact():
    v = 1 / 3
    assert jsonable(v) == v
    assert math.isclose(json.loads(json.dumps(jsonable({"v": v})))["v"], v, rel_tol=0)


def test_unreadable_path_raises_format_error(tmp_path):
    with pytest.raises(TopologyFormatError):
        load_topology(tmp_path / "missing.json")
