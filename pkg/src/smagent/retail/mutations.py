"""Order mutations behind dry-run validation and confirmation-token commits.

`validate_mutation` never touches the database; it reports validity, warnings,
required follow-ups, and the price delta. `commit_mutation` applies a request
atomically, requires a confirmation token whose fingerprint matches the
request, and bumps the revision counter. Commit is deliberately not exposed
as an agent tool: the only production caller is a flow's confirmed edge.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from smagent.money import format_cents
from smagent.retail.models import Address, LineItem, Order, RetailDatabase


class PreconditionChangedError(RuntimeError):
    """The order changed between validation and commit; commit refused."""


class ConfirmationTokenError(RuntimeError):
    """Missing, mismatched, or already-used confirmation token."""


# Reason codes carried by invalid ValidationReports.
ORDER_NOT_FOUND = "OrderNotFound"
ORDER_NOT_PENDING = "OrderNotPending"
ORDER_NOT_DELIVERED = "OrderNotDelivered"
ALREADY_RETURNED_OR_EXCHANGED = "AlreadyReturnedOrExchanged"
ITEM_NOT_IN_ORDER = "ItemNotInOrder"
ITEM_UNAVAILABLE = "ItemUnavailable"
PAYMENT_METHOD_UNKNOWN = "PaymentMethodUnknown"


@dataclass
class ItemSwap:
    old_item_id: str
    new_item_id: str

    def to_json(self) -> dict:
        return {"old_item_id": self.old_item_id, "new_item_id": self.new_item_id}

    @classmethod
    def from_json(cls, obj: dict) -> "ItemSwap":
        return cls(old_item_id=obj["old_item_id"], new_item_id=obj["new_item_id"])


@dataclass
class CancelPendingOrder:
    kind = "cancel_pending_order"
    order_id: str
    reason: str | None = None


@dataclass
class ModifyPendingOrderAddress:
    kind = "modify_pending_order_address"
    order_id: str
    new_address: Address


@dataclass
class ModifyPendingOrderItems:
    kind = "modify_pending_order_items"
    order_id: str
    replacements: list[ItemSwap] = field(default_factory=list)
    payment_method_id: str | None = None


@dataclass
class ReturnDeliveredOrderItems:
    kind = "return_delivered_order_items"
    order_id: str
    item_ids: list[str] = field(default_factory=list)
    payment_method_id: str | None = None


@dataclass
class ExchangeDeliveredOrderItems:
    kind = "exchange_delivered_order_items"
    order_id: str
    replacements: list[ItemSwap] = field(default_factory=list)
    payment_method_id: str | None = None


MutationRequest = (
    CancelPendingOrder
    | ModifyPendingOrderAddress
    | ModifyPendingOrderItems
    | ReturnDeliveredOrderItems
    | ExchangeDeliveredOrderItems
)


def request_to_json(m: MutationRequest) -> dict:
    obj: dict = {"kind": m.kind, "order_id": m.order_id}
    if isinstance(m, CancelPendingOrder):
        obj["reason"] = m.reason
    elif isinstance(m, ModifyPendingOrderAddress):
        obj["new_address"] = m.new_address.to_json()
    elif isinstance(m, (ModifyPendingOrderItems, ExchangeDeliveredOrderItems)):
        obj["replacements"] = [s.to_json() for s in m.replacements]
        obj["payment_method_id"] = m.payment_method_id
    elif isinstance(m, ReturnDeliveredOrderItems):
        obj["item_ids"] = list(m.item_ids)
        obj["payment_method_id"] = m.payment_method_id
    return obj


def request_from_json(obj: dict) -> MutationRequest:
    kind = obj["kind"]
    if kind == CancelPendingOrder.kind:
        return CancelPendingOrder(order_id=obj["order_id"], reason=obj.get("reason"))
    if kind == ModifyPendingOrderAddress.kind:
        return ModifyPendingOrderAddress(
            order_id=obj["order_id"], new_address=Address.from_json(obj["new_address"])
        )
    if kind == ModifyPendingOrderItems.kind:
        return ModifyPendingOrderItems(
            order_id=obj["order_id"],
            replacements=[ItemSwap.from_json(s) for s in obj["replacements"]],
            payment_method_id=obj.get("payment_method_id"),
        )
    if kind == ReturnDeliveredOrderItems.kind:
        return ReturnDeliveredOrderItems(
            order_id=obj["order_id"],
            item_ids=list(obj["item_ids"]),
            payment_method_id=obj.get("payment_method_id"),
        )
    if kind == ExchangeDeliveredOrderItems.kind:
        return ExchangeDeliveredOrderItems(
            order_id=obj["order_id"],
            replacements=[ItemSwap.from_json(s) for s in obj["replacements"]],
            payment_method_id=obj.get("payment_method_id"),
        )
    raise ValueError(f"unknown mutation kind {kind!r}")


def request_fingerprint(m: MutationRequest) -> str:
    canon = json.dumps(request_to_json(m), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


@dataclass
class ValidationReport:
    """Outcome of a dry-run: validity, codes, warnings, delta, follow-ups."""

    valid: bool
    codes: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    followups: list[str] = field(default_factory=list)
    price_delta_cents: int | None = None
    details: list[str] = field(default_factory=list)

    def render(self) -> str:
        lines = list(self.details)
        for w in self.warnings:
            lines.append(f"warning: {w}")
        if self.price_delta_cents is not None:
            sign = "+" if self.price_delta_cents >= 0 else ""
            lines.append(f"price difference: {sign}${format_cents(self.price_delta_cents)}")
        for f in self.followups:
            lines.append(f"required: {f}")
        if not self.valid:
            lines.append("INVALID: " + ", ".join(self.codes))
        return "\n".join(lines)


@dataclass
class MutationReceipt:
    kind: str
    order_id: str
    revision_before: int
    revision_after: int
    amount_cents: int  # positive = charge, negative = refund, 0 = neutral
    before_summary: str
    after_summary: str

    def render(self) -> str:
        if self.amount_cents > 0:
            money = f"additional charge ${format_cents(self.amount_cents)}"
        elif self.amount_cents < 0:
            money = f"refund ${format_cents(-self.amount_cents)}"
        else:
            money = "no charge or refund"
        return (
            f"{self.kind} committed on {self.order_id} "
            f"(revision {self.revision_before} -> {self.revision_after}); {money}.\n"
            f"before: {self.before_summary}\nafter: {self.after_summary}"
        )


def _order_summary(order: Order) -> str:
    items = ", ".join(f"{li.item_id} x{li.quantity}" for li in order.line_items)
    extra = f", post-delivery action: {order.post_delivery_action}" if order.post_delivery_action else ""
    return f"status={order.status}, items=[{items}], ship to {order.shipping_address.oneline()}{extra}"


def _invalid(code: str, detail: str) -> ValidationReport:
    return ValidationReport(valid=False, codes=[code], details=[detail])


def _check_payment_method(db: RetailDatabase, order: Order, payment_method_id: str | None, report: ValidationReport) -> None:
    if payment_method_id is None:
        return
    user = db.users[order.user_id]
    if payment_method_id not in {pm.id for pm in user.payment_methods}:
        report.valid = False
        report.codes.append(PAYMENT_METHOD_UNKNOWN)
        report.details.append(f"payment method {payment_method_id} does not belong to {order.user_id}")


def _resolve_swaps(
    db: RetailDatabase, order: Order, swaps: list[ItemSwap], report: ValidationReport
) -> list[tuple[LineItem, str, int]]:
    """Match swaps against line items; returns (line, new_item_id, new_price)."""
    resolved = []
    by_item = {li.item_id: li for li in order.line_items}
    seen_old: set[str] = set()
    for swap in swaps:
        line = by_item.get(swap.old_item_id)
        if line is None or swap.old_item_id in seen_old:
            report.valid = False
            report.codes.append(ITEM_NOT_IN_ORDER)
            report.details.append(
                f"item {swap.old_item_id} is not in order {order.order_id}"
                if line is None
                else f"item {swap.old_item_id} listed twice in the replacements"
            )
            continue
        seen_old.add(swap.old_item_id)
        product = db.products[line.product_id]
        new_item = product.items.get(swap.new_item_id)
        if new_item is None:
            report.valid = False
            report.codes.append(ITEM_UNAVAILABLE)
            report.details.append(
                f"item {swap.new_item_id} is not an option of {product.name} ({product.product_id})"
            )
            continue
        if not new_item.available:
            report.valid = False
            report.codes.append(ITEM_UNAVAILABLE)
            report.details.append(f"item {swap.new_item_id} is currently unavailable")
            continue
        resolved.append((line, swap.new_item_id, new_item.price_cents))
    return resolved


def validate_mutation(db: RetailDatabase, m: MutationRequest) -> ValidationReport:
    """Dry-run a mutation request; the database is never modified."""
    order = db.orders.get(m.order_id)
    if order is None:
        return _invalid(ORDER_NOT_FOUND, f"order {m.order_id} does not exist")

    report = ValidationReport(valid=True)

    if isinstance(m, CancelPendingOrder):
        if order.status != "pending":
            return _invalid(ORDER_NOT_PENDING, f"order {m.order_id} is {order.status}, not pending")
        refund = sum(li.unit_price_cents * li.quantity for li in order.line_items)
        report.price_delta_cents = -refund
        report.details.append(f"cancel pending order {m.order_id} ({len(order.line_items)} line item(s))")
        report.details.append(f"refund of ${format_cents(refund)} to {order.payment_method_id}")
        if m.reason is None:
            report.followups.append("collect the cancellation reason from the user")
        else:
            report.details.append(f"cancellation reason: {m.reason}")
        return report

    if isinstance(m, ModifyPendingOrderAddress):
        if order.status != "pending":
            return _invalid(ORDER_NOT_PENDING, f"order {m.order_id} is {order.status}, not pending")
        report.details.append(f"change shipping address of {m.order_id}")
        report.details.append(f"from: {order.shipping_address.oneline()}")
        report.details.append(f"to:   {m.new_address.oneline()}")
        report.price_delta_cents = 0
        return report

    if isinstance(m, ModifyPendingOrderItems):
        if order.status != "pending":
            return _invalid(ORDER_NOT_PENDING, f"order {m.order_id} is {order.status}, not pending")
        _check_payment_method(db, order, m.payment_method_id, report)
        resolved = _resolve_swaps(db, order, m.replacements, report)
        if report.valid:
            delta = 0
            for line, new_id, new_price in resolved:
                delta += (new_price - line.unit_price_cents) * line.quantity
                report.details.append(
                    f"replace {line.item_id} (${format_cents(line.unit_price_cents)}) "
                    f"with {new_id} (${format_cents(new_price)}) x{line.quantity}"
                )
            report.price_delta_cents = delta
        return report

    if isinstance(m, (ReturnDeliveredOrderItems, ExchangeDeliveredOrderItems)):
        if order.status != "delivered":
            return _invalid(ORDER_NOT_DELIVERED, f"order {m.order_id} is {order.status}, not delivered")
        if order.post_delivery_action is not None:
            return _invalid(
                ALREADY_RETURNED_OR_EXCHANGED,
                f"order {m.order_id} was already {order.post_delivery_action}; "
                "an order can be exchanged or returned only once",
            )
        _check_payment_method(db, order, m.payment_method_id, report)
        if isinstance(m, ReturnDeliveredOrderItems):
            by_item = {li.item_id: li for li in order.line_items}
            refund = 0
            seen: set[str] = set()
            for item_id in m.item_ids:
                line = by_item.get(item_id)
                if line is None or item_id in seen:
                    report.valid = False
                    report.codes.append(ITEM_NOT_IN_ORDER)
                    report.details.append(f"item {item_id} is not in order {m.order_id}")
                    continue
                seen.add(item_id)
                refund += line.unit_price_cents * line.quantity
                report.details.append(
                    f"return {item_id} x{line.quantity} (${format_cents(line.unit_price_cents)} each)"
                )
            if report.valid:
                report.price_delta_cents = -refund
                report.details.append(
                    f"refund of ${format_cents(refund)} to {m.payment_method_id or order.payment_method_id}"
                )
        else:
            resolved = _resolve_swaps(db, order, m.replacements, report)
            if report.valid:
                delta = 0
                for line, new_id, new_price in resolved:
                    delta += (new_price - line.unit_price_cents) * line.quantity
                    report.details.append(
                        f"exchange {line.item_id} (${format_cents(line.unit_price_cents)}) "
                        f"for {new_id} (${format_cents(new_price)}) x{line.quantity}"
                    )
                report.price_delta_cents = delta
                report.details.append(
                    f"difference settled via {m.payment_method_id or order.payment_method_id}"
                )
        report.warnings.append("a delivered order can be exchanged or returned only once")
        return report

    raise TypeError(f"unsupported mutation request {type(m).__name__}")


def commit_mutation(db: RetailDatabase, m: MutationRequest, token) -> MutationReceipt:
    """Apply a validated request. `token` must fingerprint-match `m` and be unused."""
    if token is None:
        raise ConfirmationTokenError("commit requires a confirmation token")
    if getattr(token, "used", True):
        raise ConfirmationTokenError("confirmation token already used")
    if getattr(token, "fingerprint", None) != request_fingerprint(m):
        raise ConfirmationTokenError("confirmation token does not match this request")

    report = validate_mutation(db, m)
    if not report.valid:
        raise PreconditionChangedError(report.render())
    if isinstance(m, CancelPendingOrder) and m.reason is None:
        raise PreconditionChangedError("cancellation reason is required to commit")

    token.used = True
    order = db.orders[m.order_id]
    before = _order_summary(order)
    amount = report.price_delta_cents or 0

    if isinstance(m, CancelPendingOrder):
        order.status = "cancelled"
        order.cancellation_reason = m.reason
    elif isinstance(m, ModifyPendingOrderAddress):
        order.shipping_address = m.new_address
    elif isinstance(m, ModifyPendingOrderItems):
        _apply_swaps(db, order, m.replacements)
    elif isinstance(m, ReturnDeliveredOrderItems):
        order.post_delivery_action = "returned"
    elif isinstance(m, ExchangeDeliveredOrderItems):
        order.post_delivery_action = "exchanged"
        _apply_swaps(db, order, m.replacements)

    revision_before = db.revision
    db.revision += 1
    return MutationReceipt(
        kind=m.kind,
        order_id=m.order_id,
        revision_before=revision_before,
        revision_after=db.revision,
        amount_cents=amount,
        before_summary=before,
        after_summary=_order_summary(order),
    )


def _apply_swaps(db: RetailDatabase, order: Order, swaps: list[ItemSwap]) -> None:
    by_item = {li.item_id: li for li in order.line_items}
    for swap in swaps:
        line = by_item.pop(swap.old_item_id)
        new_item = db.products[line.product_id].items[swap.new_item_id]
        line.item_id = swap.new_item_id
        line.unit_price_cents = new_item.price_cents
