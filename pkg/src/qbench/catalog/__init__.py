"""Registry of q-series identities and the coefficient-comparison verifier."""

from .core import (DEFAULT_ORDER, IdentityRecord, Sample, VerificationReport, catalog_load,
                   catalog_path, get_record, mutate_integer, parse_catalog, verify, verify_all,
                   verify_record)

__all__ = ["DEFAULT_ORDER", "IdentityRecord", "Sample", "VerificationReport", "catalog_load",
           "catalog_path", "get_record", "mutate_integer", "parse_catalog", "verify",
           "verify_all", "verify_record"]
