from __future__ import annotations

import copy
import json

import httpx
import pytest

from gfermat.cyclotomic import build_field, split_prime
from gfermat.eigenforms import (
    CURVE_26B1,
    EigenformDataError,
    FetchError,
    convert_remote_record,
    eigenvalues_from_curve,
    fetch_eigenform,
    from_json,
    ingest_eigenform,
    satisfies_hasse,
    write_eigenform,
)
from gfermat.verify import packaged_eigenform


@pytest.fixture(scope="module")
def f9():
    return eigenvalues_from_curve(CURVE_26B1, 13, "Kprime", (3, 5, 31, 47, 79), label="f9")


def test_packaged_file_matches_curve(f9):
    g = ingest_eigenform(packaged_eigenform("f9"), (3, 5, 31, 47))
    for key, val in f9.eigenvalues.items():
        assert g.eigenvalues[key] == val


def test_split_primes_share_eigenvalue(f9):
    # residue field F_q at each prime above a split q: all a equal the curve's a_q
    K = build_field(13, subfield=True)
    for q in (5, 31, 47, 79):
        vals = {f9.eigenvalues[(q, P.factor_index)] for P in split_prime(K, q)}
        assert len(vals) == 1


def test_bad_reduction_refused():
    with pytest.raises(EigenformDataError):
        eigenvalues_from_curve(CURVE_26B1, 13, "Kprime", (2,))


def test_round_trip(tmp_path, f9):
    path = write_eigenform(f9, tmp_path / "f9.json")
    g = ingest_eigenform(path, (3, 5))
    assert g == f9
    # suffix is optional
    assert ingest_eigenform(tmp_path / "f9") == f9


def test_schema_rejects_unknown_key(f9):
    obj = f9.to_json()
    obj["extra"] = 1
    with pytest.raises(EigenformDataError, match="schema"):
        from_json(obj)


def test_hasse_rejected(f9):
    obj = f9.to_json()
    obj["eigenvalues"][0]["a"] = [11]  # q = 3 is inert, N = 27, 2 sqrt 27 < 11
    with pytest.raises(EigenformDataError, match="Hasse"):
        from_json(obj)


def test_missing_index_named():
    f = eigenvalues_from_curve(CURVE_26B1, 13, "K", (79,), label="x")
    obj = f.to_json()
    obj["eigenvalues"] = [e for e in obj["eigenvalues"] if e["index"] != 2]
    with pytest.raises(EigenformDataError, match="q=79, index=2"):
        from_json(obj, required_qs=(79,))


def test_hasse_quadratic_field():
    poly = (-2, 0, 1)  # Q(sqrt 2)
    assert satisfies_hasse((1, 1), 7, poly)  # 1 + sqrt2 ~ 2.41 <= 2 sqrt 7
    assert satisfies_hasse((0, 3), 7, poly)  # 3 sqrt 2 ~ 4.24
    # 4 - sqrt 2 is fine, 4 + sqrt 2 ~ 5.41 exceeds 2 sqrt 7 ~ 5.29 in the other embedding
    assert not satisfies_hasse((4, 1), 7, poly)


def test_invalid_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(EigenformDataError, match="not valid JSON"):
        ingest_eigenform(p)
    with pytest.raises(EigenformDataError, match="not found"):
        ingest_eigenform(tmp_path / "missing.json")


RECORD = {
    "label": "2.2.13.1-4.1-a",
    "hecke_polynomial": "x^2 - 3",
    "hecke_eigenvalues": ["e", "-1", "2*e - 1"],
    "primes": [[3, 0], [5, 0], [5, 1]],
    "level": "2*O_K",
}


def test_convert_remote_record():
    obj = convert_remote_record(RECORD, 13, "Kprime")
    assert obj["hecke_poly"] == [-3, 0, 1]
    assert [e["a"] for e in obj["eigenvalues"]] == [[0, 1], [-1], [-1, 2]]


def _client(handler):
    return httpx.Client(transport=httpx.MockTransport(handler))


def test_fetch_ok():
    def handler(request):
        assert request.url.params["label"] == RECORD["label"]
        return httpx.Response(200, json={"data": [RECORD]})

    obj = fetch_eigenform(RECORD["label"], "https://example.test/api", 13, "Kprime", client=_client(handler))
    assert obj["label"] == RECORD["label"]


@pytest.mark.parametrize("status,retriable", [(503, True), (429, True), (404, False)])
def test_fetch_errors(status, retriable):
    client = _client(lambda r: httpx.Response(status))
    with pytest.raises(FetchError) as exc:
        fetch_eigenform("x", "https://example.test/api", 13, client=client)
    assert exc.value.retriable is retriable


def test_fetch_network_failure_is_retriable():
    def handler(request):
        raise httpx.ConnectError("boom", request=request)

    with pytest.raises(FetchError) as exc:
        fetch_eigenform("x", "https://example.test/api", 13, client=_client(handler))
    assert exc.value.retriable


def test_fetch_label_missing():
    client = _client(lambda r: httpx.Response(200, json={"data": []}))
    with pytest.raises(FetchError) as exc:
        fetch_eigenform("x", "https://example.test/api", 13, client=client)
    assert not exc.value.retriable
