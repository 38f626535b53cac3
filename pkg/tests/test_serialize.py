import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from unitpoly import serialize
from unitpoly.errors import ParseError
from unitpoly.finder import find_unit_cyclic_quad
from unitpoly.hyperbola import certify_area_bound
from unitpoly.regions import CellRegion, Disk, HalfPlane, HyperbolaRegionPredicate, Intersection, Rectangle, Union


@pytest.fixture(scope="module")
def square():
    return CellRegion.from_predicate(Rectangle((0, 0), (10, 10)), (0, 0, 10, 10), 0.05)


class TestLowLevel:
    @given(st.floats(allow_nan=False, allow_infinity=False))
    def test_floats_round_trip_exactly(self, x):
        assert serialize.loads(serialize.dumps({"x": x}))["x"] == x

    def test_numpy_values(self):
        text = serialize.dumps({"a": np.float64(0.1), "b": np.int64(3), "c": (1, 2), "d": np.bool_(True)})
        assert json.loads(text) == {"a": 0.1, "b": 3, "c": [1, 2], "d": True}

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            serialize.dumps({"x": math.inf})

    def test_parse_error_names_line(self):
        with pytest.raises(ParseError, match=r"f\.json: line 2, column \d+"):
            serialize.loads('{\n  "h": 0.1,,\n}', "f.json")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError, match="cannot read"):
            serialize.read_json(tmp_path / "absent.json")


class TestRegions:
    @pytest.mark.parametrize(
        "pred",
        [
            Disk((1.0, 2.0), 0.5),
            Rectangle((0.0, 0.0), (1.0, 0.5)),
            HalfPlane((1.0, -1.0), 0.25),
            HyperbolaRegionPredicate(),
            Union((Disk((0, 0), 1.0), Rectangle((1, 1), (2, 2)))),
            Intersection((Disk((0, 0), 2.0), HalfPlane((0.0, 1.0), 0.0))),
        ],
    )
    def test_generator_round_trip(self, pred):
        reg = CellRegion.from_predicate(pred, (-2, -2, 3, 3), 0.1)
        doc = serialize.loads(serialize.dumps(serialize.region_to_dict(reg)))
        back = serialize.region_from_dict(doc)
        assert np.array_equal(back.cells, reg.cells)
        assert back.h == reg.h

    def test_explicit_cells(self):
        reg = CellRegion(0.25, [(0, 0), (3, -2), (-1, 5)])
        doc = serialize.region_to_dict(reg)
        assert "cells" in doc
        back = serialize.region_from_dict(serialize.loads(serialize.dumps(doc)))
        assert np.array_equal(back.cells, reg.cells)

    def test_bad_cell(self):
        with pytest.raises(ParseError, match=r"region\.cells\[1\]: expected a pair"):
            serialize.region_from_dict({"h": 0.1, "cells": [[0, 0], [1]]})
        with pytest.raises(ParseError, match=r"cells\[0\]\[1\]: expected an integer"):
            serialize.region_from_dict({"h": 0.1, "cells": [[0, 0.5]]})

    def test_bad_fields(self):
        with pytest.raises(ParseError, match=r"region\.h: missing field"):
            serialize.region_from_dict({"cells": []})
        with pytest.raises(ParseError, match=r"region\.h: resolution must be positive"):
            serialize.region_from_dict({"h": -1, "cells": []})
        with pytest.raises(ParseError, match=r"region\.format"):
            serialize.region_from_dict({"format": "other", "h": 1, "cells": []})
        with pytest.raises(ParseError, match=r"predicate\.kind: unknown"):
            serialize.region_from_dict({"h": 1, "predicate": {"kind": "blob"}, "window": [0, 0, 1, 1]})
        with pytest.raises(ParseError, match=r"predicate\.children\[1\]\.radius: missing"):
            serialize.region_from_dict(
                {"h": 1, "predicate": {"kind": "union", "children": [{"kind": "hyperbola-region"}, {"kind": "disk", "center": [0, 0]}]}, "window": [0, 0, 1, 1]}
            )
        with pytest.raises(ParseError, match=r"window"):
            serialize.region_from_dict({"h": 1, "predicate": {"kind": "hyperbola-region"}, "window": [0, 0, 1]})


class TestQuadCertificates:
    def test_round_trip(self, square):
        cert, trace = find_unit_cyclic_quad(square)
        text = serialize.dumps(serialize.certificate_to_dict(cert, trace))
        back, back_trace = serialize.certificate_from_dict(serialize.loads(text))
        assert back == cert
        assert back_trace == trace
        assert serialize.dumps(serialize.certificate_to_dict(back, back_trace)) == text

    def test_rejects_unknown_trace_field(self, square):
        cert, trace = find_unit_cyclic_quad(square)
        doc = serialize.certificate_to_dict(cert, trace)
        doc["trace"]["colour"] = "blue"
        with pytest.raises(ParseError, match=r"trace\.colour"):
            serialize.certificate_from_dict(doc)

    def test_missing_vertex(self, square):
        cert, _ = find_unit_cyclic_quad(square)
        doc = serialize.certificate_to_dict(cert)
        del doc["vertices"]["E"]
        with pytest.raises(ParseError, match=r"vertices\.E: missing field"):
            serialize.certificate_from_dict(doc)

    def test_bad_membership(self, square):
        cert, _ = find_unit_cyclic_quad(square)
        doc = serialize.certificate_to_dict(cert)
        doc["membership"] = [1, 1, 1, 1]
        with pytest.raises(ParseError, match="membership"):
            serialize.certificate_from_dict(doc)


class TestPolygons:
    TINY = [(10.0, 0.02), (10.005, 0.02), (10.0025, 0.02 + 0.005 * math.sqrt(3) / 2)]

    def test_polygon_round_trip(self):
        doc = serialize.loads(serialize.dumps(serialize.polygon_to_dict(self.TINY)))
        assert list(serialize.polygon_from_dict(doc).vertices) == self.TINY

    def test_too_few_vertices(self):
        with pytest.raises(ParseError, match="at least 3"):
            serialize.polygon_from_dict({"vertices": [[2, 0.1], [3, 0.05]]})

    def test_bad_coordinate(self):
        with pytest.raises(ParseError, match=r"vertices\[1\]\[0\]: expected a number"):
            serialize.polygon_from_dict({"vertices": [[2, 0.1], ["x", 0.05], [3, 0.01]]})

    def test_case_certificate_round_trip(self, tmp_path):
        cert = certify_area_bound(self.TINY)
        path = tmp_path / "c.json"
        serialize.write_json(path, serialize.case_certificate_to_dict(cert, self.TINY))
        poly, back = serialize.load_polygon_or_certificate(path)
        assert list(poly.vertices) == self.TINY
        assert back.branch == cert.branch
        assert back.certified_area_bound == cert.certified_area_bound
        assert back.witness == serialize.loads(serialize.dumps(cert.witness))

    def test_plain_polygon_file(self, tmp_path):
        path = tmp_path / "p.json"
        serialize.write_json(path, serialize.polygon_to_dict(self.TINY))
        poly, claimed = serialize.load_polygon_or_certificate(path)
        assert claimed is None and poly.vertices[0] == (10.0, 0.02)
