"""Small-sample VAR/VECM toolkit for annual macroeconomic series."""

__version__ = "0.1.0"

from .errors import EcmkitError
from .irf import IrfResult, compute_irf
from .lagselect import LagSelectionTable, select_lag_order
from .ols import DesignMatrix, RegressionResult, fit, loglikelihood
from .series import TimeSeries, acf, align, ccf, difference
from .unitroot import (Deterministic, IntegrationOrder, UnitRootResult, adf_test, classify_integration,
                       classify_stationarity, pp_test)
from .var import (GrangerResult, VarModel, VecmModel, cointegration_precheck, fit_var, fit_vecm,
                  granger_test)

__all__ = [
    "Deterministic", "DesignMatrix", "EcmkitError", "GrangerResult", "IntegrationOrder", "IrfResult",
    "LagSelectionTable", "RegressionResult", "TimeSeries", "UnitRootResult", "VarModel", "VecmModel",
    "acf", "adf_test", "align", "ccf", "classify_integration", "classify_stationarity",
    "cointegration_precheck", "compute_irf", "difference", "fit", "fit_var", "fit_vecm", "granger_test",
    "loglikelihood", "pp_test", "select_lag_order",
]
