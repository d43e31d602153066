from noiselet_spc.recon.operator import MeasurementOperator, adjoint_op, forward_op
from noiselet_spc.recon.bpdn import ReconConfig, ReconResult, solve_bpdn, solve_full
from noiselet_spc.recon.metrics import compress_topk, mse, psnr
