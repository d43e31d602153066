from noiselet_spc.sensing.plan import SamplingPlan, make_plan, plan_from_ratio
from noiselet_spc.sensing.patterns import PackedBundle, PatternSet, build_patterns, bundles_for_plan
from noiselet_spc.sensing.spc import MeasurementRecord, SceneImage, measure, measure_plan, restore_complex
