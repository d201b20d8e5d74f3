import sys
from pathlib import Path

# Make the sibling oracle helpers importable regardless of rootdir layout.
sys.path.insert(0, str(Path(__file__).parent))
