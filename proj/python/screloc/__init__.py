"""Scene-coordinate camera relocalization toolkit.

Thin Python surface over the C++ core: geometry (Pose, Intrinsics),
ground-truth scene-coordinate generation, the oracle prediction source,
RANSAC pose optimization, data augmentation, evaluation metrics, the SCRD
container and the four batch commands (gen-gt, augment, localize,
evaluate). Images are numpy arrays: RGB (h, w, 3) uint8, depth (h, w)
uint16 millimeters, scene coordinates (h, w, 3) float64 millimeters,
masks (h, w) bool.
"""

from ._screloc import *  # noqa: F401,F403
from ._screloc import __version__  # noqa: F401
