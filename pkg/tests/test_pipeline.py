import json
import random

import pytest

from g3isogeny import example_data
from g3isogeny.pipeline import (InconsistentDLP, InvalidKernel, MalformedInput, RunArtifact,
                                RunConfig, VersionMismatch, load, main, serialize,
                                translate_dlp, validate_kernel, verify_artifact)


@pytest.fixture(scope="module")
def artifact_text(reference):
    return reference.artifact().dumps()


@pytest.fixture(scope="module")
def artifact_file(artifact_text, tmp_path_factory):
    path = tmp_path_factory.mktemp("art") / "artifact.json"
    path.write_text(artifact_text)
    return str(path)


# configuration and kernel

def test_config_roundtrip():
    cfg = RunConfig.reference(seed=7)
    again = RunConfig.from_json(json.loads(json.dumps(cfg.to_json())))
    assert again.to_json() == cfg.to_json()
    with pytest.raises(MalformedInput):
        RunConfig.from_json({"p": 257})


def test_kernel_rejection(ref_data):
    K, C, T = ref_data
    rng = random.Random(1)
    assert len(validate_kernel(T, 3, rng)) == 3
    with pytest.raises(InvalidKernel):
        validate_kernel(T[:2], 3, rng)
    with pytest.raises(InvalidKernel):
        validate_kernel([T[0], T[1], C.random_divisor(rng)], 3, rng)
    with pytest.raises(InvalidKernel):
        validate_kernel([T[0], T[1], C.zero()], 3, rng)
    with pytest.raises(InvalidKernel):
        validate_kernel(T, 2, rng)


# serialization

def test_artifact_roundtrip(artifact_text):
    art = load(artifact_text)
    assert isinstance(art, RunArtifact)
    assert art.valid
    assert art.dumps() == artifact_text
    assert serialize(art) == artifact_text


def test_component_roundtrip(reference):
    text = serialize(reference.model.quartic)
    assert load(text) == reference.model.quartic.to_json()


def test_truncated_input(artifact_text):
    for cut in (0, 1, len(artifact_text) // 2, len(artifact_text) - 1):
        with pytest.raises(MalformedInput):
            load(artifact_text[:cut])


def test_wrong_format_and_fields(artifact_text):
    d = json.loads(artifact_text)
    with pytest.raises(MalformedInput):
        load(json.dumps({**d, "format": "other"}))
    broken = json.loads(artifact_text)
    del broken["artifact"]["isogeny"]
    with pytest.raises(MalformedInput):
        load(json.dumps(broken))
    flipped = json.loads(artifact_text)
    flipped["artifact"]["valid"] = not flipped["artifact"]["valid"]
    with pytest.raises(MalformedInput):
        load(json.dumps(flipped))


def test_version_mismatch(artifact_text, reference):
    d = json.loads(artifact_text)
    d["version"] = 99
    with pytest.raises(VersionMismatch):
        load(json.dumps(d))
    c = json.loads(serialize(reference.model.quartic))
    c["version"] = 0
    with pytest.raises(VersionMismatch):
        load(json.dumps(c))


# DLP translation

def test_translate_dlp(ref_data):
    K, C, T = ref_data
    P = C.point_divisor(*(K(c) for c in example_data.P1))
    Q = C.point_divisor(*(K(c) for c in example_data.P2))
    m = example_data.DLP_M
    assert translate_dlp(P, Q, m) == m
    assert translate_dlp(P, -Q, m) == -m
    assert translate_dlp(P, Q, -m) == m
    with pytest.raises(InconsistentDLP):
        translate_dlp(P, Q, m + 1)


def test_verify_artifact(artifact_text):
    out = verify_artifact(load(artifact_text), points=5, seed=3)
    assert out == {"stored_report": True, "anchor": True, "conjugate": True,
                   "dlp_image": True}


# command line

def test_cli_quotient_is_deterministic(artifact_text, tmp_path, capsys):
    out = tmp_path / "a.json"
    assert main(["quotient", "--out", str(out)]) == 0
    assert out.read_text().strip() == artifact_text


def test_cli_image(artifact_file, tmp_path):
    out = tmp_path / "img.json"
    assert main(["image", artifact_file, "2,7", "121,5", "--out", str(out)]) == 0
    res = json.loads(out.read_text())
    assert [r["point"] for r in res] == [[2, 7], [121, 5]]
    assert all(len(r["x_cubic"]) == 4 and len(r["y_cubic"]) == 4 for r in res)


def test_cli_translate(artifact_file, tmp_path):
    out = tmp_path / "t.json"
    m = example_data.DLP_M
    assert main(["translate", artifact_file, "--P", "2,7", "--Q", "121,5",
                 "--m", str(-m), "--out", str(out)]) == 0
    assert json.loads(out.read_text()) == {"m": m}
    assert main(["translate", artifact_file, "--P", "2,7", "--Q", "121,5",
                 "--m", str(m + 1), "--out", str(out)]) == 1


def test_cli_verify(artifact_file, tmp_path):
    out = tmp_path / "v.json"
    assert main(["verify", artifact_file, "--seed", "4", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["ok"] is True


def test_cli_rejects_bad_artifact(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["verify", str(bad)]) == 2
    assert "error" in capsys.readouterr().err
