r"""
Copyright 2026 The trajectory_uncertainty developers

Licensed under the MIT License. See the LICENSE file in the project root.
"""

import numpy as np

from trajectory_uncertainty.dataset.scene import DatasetSplit, PredictionWindow


def split_dataset(
    windows: list[PredictionWindow], test_ratio: float, seed: int
) -> DatasetSplit:
    """Split windows into training and test subsets by target track.

    All windows of one track land on the same side. The test tracks are
    drawn from the sorted set of track keys with a generator seeded by
    ``seed``, so the split only depends on the track set, the ratio and the
    seed, not on the order of the windows.

    :param windows: Windows to split.
    :param test_ratio: Share of tracks in the test subset, 0 < ratio < 1.
    :param seed: Seed of the permutation.
    :returns: The split.
    :raises ValueError: For an invalid ratio or fewer than two distinct tracks.
    """
    if not 0.0 < test_ratio < 1.0:
        raise ValueError(f"test_ratio must be in (0, 1), got {test_ratio}")

    trackKeys = sorted({window.trackKey for window in windows})
    if len(trackKeys) < 2:
        raise ValueError("split_dataset needs at least 2 distinct tracks")

    numberOfTestTracks = int(round(test_ratio * len(trackKeys)))
    numberOfTestTracks = min(max(numberOfTestTracks, 1), len(trackKeys) - 1)

    permutation = np.random.default_rng(seed).permutation(len(trackKeys))
    testKeys = {trackKeys[i] for i in permutation[:numberOfTestTracks]}

    train = [window for window in windows if window.trackKey not in testKeys]
    test = [window for window in windows if window.trackKey in testKeys]
    return DatasetSplit(train=train, test=test, seed=seed)
