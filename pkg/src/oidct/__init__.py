"""Learned inverse DCT kernels that compensate JPEG-style quantization error."""
from .codec import EncodedImage, ImagePlanes, decode, encode, extract_training_pairs
from .learner import (TrainedKernel, TrainingAccumulator, kernel_distance, select_kernel,
                      solve_kernel)
from .metrics import psnr_rgb, ssim
from .quantizer import QuantTable, dequantize, quantize, table_from_qf
from .transform import (KernelKind, KernelMatrix, build_forward_kernel, flatten,
                        forward_dct, inverse_transform, standard_inverse_kernel, unflatten)

__version__ = "0.1.0"
