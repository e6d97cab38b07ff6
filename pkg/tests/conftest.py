import json

import pytest


@pytest.fixture
def problem_file(tmp_path):
    """Factory writing a problem document to disk, returning its path."""

    def write(doc, name="problem.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return str(path)

    return write
