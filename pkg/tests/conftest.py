# Anchors pytest's rootdir so sibling helper modules (oracles.py) are importable.
