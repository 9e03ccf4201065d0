"""kidney_dss: predicts whether a procured deceased-donor kidney will be
transplanted or discarded, and explains the drivers of that prediction.

Pipeline pieces: CSV/synthetic data handling, imputation + MAD outlier
flagging + min-max normalization, four classifiers (gradient boosting,
random forest, naive Bayes, logistic regression with Wald inference),
confusion/ROC evaluation, model artifacts, an experiment CLI, and an HTTP
prediction service.
"""

from .records import Dataset, DonorRecord, Outcome, parse_csv, summarize, write_csv

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "DonorRecord",
    "Outcome",
    "parse_csv",
    "summarize",
    "write_csv",
    "__version__",
]
