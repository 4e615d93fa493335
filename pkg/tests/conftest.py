"""Make the package importable from a source checkout without installing."""
import importlib.util
import pathlib
import sys

if importlib.util.find_spec("detlab") is None:
    sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))
