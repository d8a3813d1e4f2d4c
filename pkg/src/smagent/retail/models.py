"""Retail data model with a byte-stable canonical JSON serialization.

Two databases are considered equal exactly when their canonical
serializations (sorted keys, compact separators) are byte-identical;
grading and snapshot/restore rely on that.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from smagent.money import cents_from_str, format_cents

USER_ID_RE = re.compile(r"^[a-z]+_[a-z]+_\d{4}$")
PRODUCT_ID_RE = re.compile(r"^\d{10}$")
ORDER_ID_RE = re.compile(r"^#W\d{7}$")

ORDER_STATUSES = ("pending", "delivered", "cancelled")
POST_DELIVERY_ACTIONS = ("returned", "exchanged")
PAYMENT_KINDS = ("credit_card", "paypal", "gift_card")


@dataclass
class Address:
    line1: str
    city: str
    state: str
    zip: str
    line2: str = ""

    def to_json(self) -> dict:
        return {
            "line1": self.line1,
            "line2": self.line2,
            "city": self.city,
            "state": self.state,
            "zip": self.zip,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Address":
        return cls(
            line1=obj["line1"],
            line2=obj.get("line2", ""),
            city=obj["city"],
            state=obj["state"],
            zip=obj["zip"],
        )

    def oneline(self) -> str:
        line2 = f", {self.line2}" if self.line2 else ""
        return f"{self.line1}{line2}, {self.city}, {self.state} {self.zip}"


@dataclass
class PaymentMethod:
    id: str
    kind: str  # one of PAYMENT_KINDS

    def to_json(self) -> dict:
        return {"id": self.id, "kind": self.kind}

    @classmethod
    def from_json(cls, obj: dict) -> "PaymentMethod":
        return cls(id=obj["id"], kind=obj["kind"])


@dataclass
class User:
    user_id: str
    first_name: str
    last_name: str
    email: str
    zip: str
    default_address: Address
    payment_methods: list[PaymentMethod] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "user_id": self.user_id,
            "first_name": self.first_name,
            "last_name": self.last_name,
            "email": self.email,
            "zip": self.zip,
            "default_address": self.default_address.to_json(),
            "payment_methods": [p.to_json() for p in self.payment_methods],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "User":
        return cls(
            user_id=obj["user_id"],
            first_name=obj["first_name"],
            last_name=obj["last_name"],
            email=obj["email"],
            zip=obj["zip"],
            default_address=Address.from_json(obj["default_address"]),
            payment_methods=[PaymentMethod.from_json(p) for p in obj["payment_methods"]],
        )


@dataclass
class ProductItem:
    item_id: str
    attributes: dict[str, str]
    price_cents: int
    available: bool

    def to_json(self) -> dict:
        return {
            "item_id": self.item_id,
            "attributes": dict(sorted(self.attributes.items())),
            "price": format_cents(self.price_cents),
            "available": self.available,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ProductItem":
        return cls(
            item_id=obj["item_id"],
            attributes=dict(obj["attributes"]),
            price_cents=cents_from_str(obj["price"]),
            available=obj["available"],
        )


@dataclass
class Product:
    product_id: str
    name: str
    items: dict[str, ProductItem] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "product_id": self.product_id,
            "name": self.name,
            "items": {iid: item.to_json() for iid, item in sorted(self.items.items())},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Product":
        return cls(
            product_id=obj["product_id"],
            name=obj["name"],
            items={iid: ProductItem.from_json(i) for iid, i in obj["items"].items()},
        )


@dataclass
class LineItem:
    item_id: str
    product_id: str
    quantity: int
    unit_price_cents: int

    def to_json(self) -> dict:
        return {
            "item_id": self.item_id,
            "product_id": self.product_id,
            "quantity": self.quantity,
            "unit_price": format_cents(self.unit_price_cents),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LineItem":
        return cls(
            item_id=obj["item_id"],
            product_id=obj["product_id"],
            quantity=obj["quantity"],
            unit_price_cents=cents_from_str(obj["unit_price"]),
        )


@dataclass
class Order:
    order_id: str
    user_id: str
    status: str  # one of ORDER_STATUSES
    line_items: list[LineItem]
    shipping_address: Address
    payment_method_id: str
    post_delivery_action: str | None = None
    cancellation_reason: str | None = None

    def to_json(self) -> dict:
        return {
            "order_id": self.order_id,
            "user_id": self.user_id,
            "status": self.status,
            "line_items": [li.to_json() for li in self.line_items],
            "shipping_address": self.shipping_address.to_json(),
            "payment_method_id": self.payment_method_id,
            "post_delivery_action": self.post_delivery_action,
            "cancellation_reason": self.cancellation_reason,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Order":
        return cls(
            order_id=obj["order_id"],
            user_id=obj["user_id"],
            status=obj["status"],
            line_items=[LineItem.from_json(li) for li in obj["line_items"]],
            shipping_address=Address.from_json(obj["shipping_address"]),
            payment_method_id=obj["payment_method_id"],
            post_delivery_action=obj.get("post_delivery_action"),
            cancellation_reason=obj.get("cancellation_reason"),
        )


class IntegrityError(ValueError):
    """Raised when database contents violate a structural invariant."""


@dataclass
class RetailDatabase:
    users: dict[str, User] = field(default_factory=dict)
    products: dict[str, Product] = field(default_factory=dict)
    orders: dict[str, Order] = field(default_factory=dict)
    revision: int = 0

    def to_json(self) -> dict:
        return {
            "users": {uid: u.to_json() for uid, u in sorted(self.users.items())},
            "products": {pid: p.to_json() for pid, p in sorted(self.products.items())},
            "orders": {oid: o.to_json() for oid, o in sorted(self.orders.items())},
            "revision": self.revision,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RetailDatabase":
        return cls(
            users={uid: User.from_json(u) for uid, u in obj["users"].items()},
            products={pid: Product.from_json(p) for pid, p in obj["products"].items()},
            orders={oid: Order.from_json(o) for oid, o in obj["orders"].items()},
            revision=obj.get("revision", 0),
        )

    def canonical_serialization(self) -> str:
        """Byte-stable encoding: equal databases produce identical strings."""
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def validate(self) -> None:
        """Check id patterns, uniqueness, and referential integrity."""
        emails: set[str] = set()
        for uid, user in self.users.items():
            if uid != user.user_id or not USER_ID_RE.match(uid):
                raise IntegrityError(f"bad user id {uid!r}")
            if user.email in emails:
                raise IntegrityError(f"duplicate email {user.email!r}")
            emails.add(user.email)
            for pm in user.payment_methods:
                if pm.kind not in PAYMENT_KINDS:
                    raise IntegrityError(f"unknown payment kind {pm.kind!r}")
        for pid, product in self.products.items():
            if pid != product.product_id or not PRODUCT_ID_RE.match(pid):
                raise IntegrityError(f"bad product id {pid!r}")
            attr_sets = {frozenset(i.attributes) for i in product.items.values()}
            if len(attr_sets) > 1:
                raise IntegrityError(f"items of product {pid} disagree on attribute names")
            for item in product.items.values():
                if item.price_cents <= 0:
                    raise IntegrityError(f"item {item.item_id} has non-positive price")
                if not item.attributes:
                    raise IntegrityError(f"item {item.item_id} has no attributes")
        for oid, order in self.orders.items():
            if oid != order.order_id or not ORDER_ID_RE.match(oid):
                raise IntegrityError(f"bad order id {oid!r}")
            if order.status not in ORDER_STATUSES:
                raise IntegrityError(f"bad order status {order.status!r}")
            if order.post_delivery_action not in (None, *POST_DELIVERY_ACTIONS):
                raise IntegrityError(f"bad post_delivery_action {order.post_delivery_action!r}")
            if (order.status == "cancelled") != (order.cancellation_reason is not None):
                raise IntegrityError(f"order {oid}: cancellation_reason iff cancelled")
            user = self.users.get(order.user_id)
            if user is None:
                raise IntegrityError(f"order {oid} references unknown user {order.user_id}")
            if order.payment_method_id not in {pm.id for pm in user.payment_methods}:
                raise IntegrityError(f"order {oid} references unknown payment method")
            for li in order.line_items:
                product = self.products.get(li.product_id)
                if product is None or li.item_id not in product.items:
                    raise IntegrityError(f"order {oid} references unknown item {li.item_id}")
