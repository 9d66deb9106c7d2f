import json
import xml.etree.ElementTree as ET

import pytest

from longwave.errors import LongwaveError
from longwave.experiments import RunRecord
from longwave.io import sha256
from longwave.report import make_report


def _rec(eps, times=(0.0, 1.0, 2.0)):
    return RunRecord("CH", "ib", None, eps, eps, 1.0, list(times), [eps**2 * t for t in times],
                     energy=[dict(t=t, E_s=0.0, E_tilde=0.0, norm_r_Hs=0.0) for t in times])


def test_empty_records_rejected(tmp_path):
    with pytest.raises(LongwaveError):
        make_report([], tmp_path)


def test_single_record_still_makes_valid_svg(tmp_path):
    fits = make_report([_rec(0.1)], tmp_path)
    assert fits["status"] == "degenerate"
    for name in ("error_vs_eps.svg", "error_vs_t.svg"):
        root = ET.parse(tmp_path / "plots" / name).getroot()
        assert root.tag.endswith("svg")


def test_manifest_hashes(tmp_path):
    make_report([_rec(e, (0.0, 1.0, 2.0, 5.0)) for e in (0.2, 0.1, 0.05)], tmp_path, law="eps2")
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert len(manifest["files"]) == 8
    for entry in manifest["files"]:
        assert sha256(tmp_path / entry["path"]) == entry["sha256"]
    fits = json.loads((tmp_path / "fits.json").read_text())
    assert fits["C"] == pytest.approx(1.0)
