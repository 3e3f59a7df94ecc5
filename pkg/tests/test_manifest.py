import json

import pytest

from orthoplex.cli import build_manifest
from orthoplex.manifest import ManifestError, dumps, load, loads, same_payload, save

CASES = [
    ("orthoplex3d", (L,) * 3, per) for L in (2, 3, 4) for per in (True, False)
] + [
    ("orthoplex4d", (L,) * 4, True) for L in (2, 3, 4)
] + [
    ("orthoplex-pd", (2, 3), True),
    ("orthoplex-pd", (2, 2, 2, 2, 2), True),
    ("toric-hgp", (3, 3), True),
    ("toric-hgp", (4, 4, 4), True),
    ("toric-hgp", (3, 4), False),
]


@pytest.mark.parametrize("model,sizes,periodic", CASES)
def test_roundtrip_is_bitwise(model, sizes, periodic):
    m = build_manifest(model, sizes, (periodic,) * len(sizes))
    back = loads(dumps(m))
    assert back.code.hx == m.code.hx and back.code.hz == m.code.hz
    assert back.code.qubit_labels == m.code.qubit_labels
    assert back.code.x_labels == m.code.x_labels and back.code.z_labels == m.code.z_labels
    assert same_payload(m, back)
    assert dumps(back) == dumps(m)
    assert back.rebuild() == m.code


def test_file_roundtrip(tmp_path):
    m = build_manifest("orthoplex3d", (2, 2, 2), (True,) * 3)
    save(m, tmp_path / "c.json")
    assert same_payload(load(tmp_path / "c.json"), m)


def test_metadata_is_separate():
    m = build_manifest("orthoplex3d", (2, 2, 2), (True,) * 3)
    d = json.loads(dumps(m))
    assert set(d["metadata"]) == {"tool_version"}
    d["metadata"]["tool_version"] = "other"
    assert same_payload(loads(json.dumps(d)), m)


def test_rows_are_sorted_lists():
    d = json.loads(dumps(build_manifest("toric-hgp", (3, 3), (True, True))))
    assert d["n"] == 18 and d["kind"] == "standard-hgp"
    assert all(r == sorted(r) for r in d["hx"] + d["hz"])


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(format_version=99),
        lambda d: d.update(kind="mystery"),
        lambda d: d["hx"][0].append(10**6),
        lambda d: d["hx"][0].reverse(),
        lambda d: d.pop("hz"),
        lambda d: d["x_labels"].pop(),
    ],
)
def test_bad_manifests(mutate):
    d = json.loads(dumps(build_manifest("orthoplex3d", (2, 2, 2), (True,) * 3)))
    mutate(d)
    with pytest.raises(ManifestError):
        loads(json.dumps(d))


def test_not_json():
    with pytest.raises(ManifestError):
        loads("{")
