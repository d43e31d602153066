from noiselet_spc.transforms.base_transform import BaseTransform
from noiselet_spc.transforms.noiselet import NoiseletTransform
from noiselet_spc.transforms.haar import HaarTransform, WaveletCoeffs
