import pytest

from neqrseg import ImageGray, ThresholdConfig

# 2x2 sample with 8-bit grays, row major: top row 0, 100; bottom row 200, 255.
SAMPLE_2X2 = ImageGray(1, 8, (0, 100, 200, 255))

# 4x4 sample with 3-bit grays used throughout the segmentation tests.
SAMPLE_4X4 = ImageGray(2, 3, (3, 2, 3, 2, 2, 3, 0, 1, 0, 5, 0, 5, 0, 5, 5, 7))

# Segmenting SAMPLE_4X4 with thresholds (2, 4) and levels (0, 4, 7).
SEGMENTED_4X4 = (4, 4, 4, 4, 4, 4, 0, 0, 0, 7, 0, 7, 0, 7, 7, 7)


@pytest.fixture
def sample_2x2() -> ImageGray:
    return SAMPLE_2X2


@pytest.fixture
def sample_4x4() -> ImageGray:
    return SAMPLE_4X4


@pytest.fixture
def sample_config() -> ThresholdConfig:
    return ThresholdConfig.with_default_levels(3, (2, 4))
