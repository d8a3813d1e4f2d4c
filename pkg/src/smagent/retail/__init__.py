"""Deterministic retail environment: data model, read APIs, and gated mutations."""

from smagent.retail.models import (
    Address,
    LineItem,
    Order,
    PaymentMethod,
    Product,
    ProductItem,
    RetailDatabase,
    User,
)
from smagent.retail.database import (
    AmbiguousMatchError,
    NotFoundError,
    find_user_id_by_email,
    find_user_id_by_name_zip,
    get_order_details,
    get_product_details,
    get_user_details,
    load_database,
    restore,
    save_database,
    snapshot,
)
from smagent.retail.mutations import (
    CancelPendingOrder,
    ExchangeDeliveredOrderItems,
    ItemSwap,
    ModifyPendingOrderAddress,
    ModifyPendingOrderItems,
    MutationReceipt,
    MutationRequest,
    PreconditionChangedError,
    ReturnDeliveredOrderItems,
    ValidationReport,
    commit_mutation,
    request_fingerprint,
    validate_mutation,
)

__all__ = [
    "Address",
    "AmbiguousMatchError",
    "CancelPendingOrder",
    "ExchangeDeliveredOrderItems",
    "ItemSwap",
    "LineItem",
    "ModifyPendingOrderAddress",
    "ModifyPendingOrderItems",
    "MutationReceipt",
    "MutationRequest",
    "NotFoundError",
    "Order",
    "PaymentMethod",
    "PreconditionChangedError",
    "Product",
    "ProductItem",
    "RetailDatabase",
    "ReturnDeliveredOrderItems",
    "User",
    "ValidationReport",
    "commit_mutation",
    "find_user_id_by_email",
    "find_user_id_by_name_zip",
    "get_order_details",
    "get_product_details",
    "get_user_details",
    "load_database",
    "request_fingerprint",
    "restore",
    "save_database",
    "snapshot",
    "validate_mutation",
]
