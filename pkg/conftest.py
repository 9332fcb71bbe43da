import pathlib
import sys

# allow running the test suite from a source checkout without installing
src = pathlib.Path(__file__).parent / "src"
if src.is_dir() and str(src) not in sys.path:
    try:
        import biconserve  # noqa: F401
    except ImportError:
        sys.path.insert(0, str(src))
