"""Version single-source: the CLI and the package metadata must match jury.version.

Guards against a hardcoded version string drifting from ``jury/version.py``
(the single source of truth).
"""

from __future__ import annotations

import pathlib
import sys

import pytest

REPO_ROOT = str(pathlib.Path(__file__).resolve().parents[1])
if REPO_ROOT not in sys.path:
    sys.path.insert(0, REPO_ROOT)


def test_cli_version_matches_single_source(capsys):
    """``jury --version`` must report jury.version.__version__."""
    from jury.cli import main
    from jury.version import __version__

    with pytest.raises(SystemExit):
        main(["--version"])
    assert capsys.readouterr().out.split() == ["jury", __version__]


def test_package_reexports_version():
    import jury
    from jury.version import __version__

    assert jury.__version__ == __version__


def test_pyproject_version_matches_single_source():
    from jury.version import __version__

    text = (pathlib.Path(REPO_ROOT) / "pyproject.toml").read_text()
    assert f'version = "{__version__}"' in text
