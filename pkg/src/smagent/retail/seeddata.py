"""Builder for the desk-scale seed dataset shipped as data/retail_db.json.

The dataset is small but deliberately shaped: every flow has at least one
exercisable order, the shoe product has a unique most-expensive size-9 item,
the action camera has a price tie (tie-break coverage), one delivered order
is already returned and one already exchanged, and two users collide on
(name, zip) so the ambiguous-auth path is reachable.
"""

from __future__ import annotations

from smagent.money import cents_from_str
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

SHOES_PRODUCT_ID = "6938111410"
JIGSAW_PRODUCT_ID = "4772127242"
DESK_LAMP_PRODUCT_ID = "8310926033"
WATER_BOTTLE_PRODUCT_ID = "2757705949"
SKATEBOARD_PRODUCT_ID = "1968349452"
LUGGAGE_PRODUCT_ID = "5426915165"
BACKPACK_PRODUCT_ID = "7857633140"
LAPTOP_PRODUCT_ID = "8997727037"
CAMERA_PRODUCT_ID = "3801771614"
TSHIRT_PRODUCT_ID = "9354576549"

WALKTHROUGH_ORDER_ID = "#W5565470"


def _item(item_id: str, price: str, available: bool = True, **attributes: str) -> ProductItem:
    return ProductItem(
        item_id=item_id,
        attributes={k.replace("_", " "): v for k, v in attributes.items()},
        price_cents=cents_from_str(price),
        available=available,
    )


def _product(product_id: str, name: str, items: list[ProductItem]) -> Product:
    return Product(product_id=product_id, name=name, items={i.item_id: i for i in items})


def _products() -> list[Product]:
    return [
        _product(SHOES_PRODUCT_ID, "Shoes", [
            _item("39584562", "149.95", size="8", color="black", material="leather"),
            _item("19841307", "154.90", size="9", color="black", material="leather"),
            _item("55370328", "189.50", size="9", color="white", material="canvas"),
            _item("77231945", "197.33", size="9", color="red", material="leather"),
            _item("61026402", "205.00", available=False, size="9", color="white", material="leather"),
            _item("83110248", "159.75", size="10", color="black", material="canvas"),
        ]),
        _product(JIGSAW_PRODUCT_ID, "Jigsaw Puzzle", [
            _item("11016094", "28.40", pieces="500", theme="animals", difficulty_level="beginner"),
            _item("26240952", "52.01", pieces="1000", theme="art", difficulty_level="intermediate"),
            _item("30741976", "53.91", pieces="1000", theme="fantasy", difficulty_level="intermediate"),
            _item("47261503", "54.09", pieces="1000", theme="animals", difficulty_level="intermediate"),
            _item("55835374", "62.15", pieces="1500", theme="animals", difficulty_level="intermediate"),
            _item("68401253", "71.20", pieces="1500", theme="fantasy", difficulty_level="expert"),
            _item("73620205", "49.10", available=False, pieces="1000", theme="art", difficulty_level="expert"),
        ]),
        _product(DESK_LAMP_PRODUCT_ID, "Desk Lamp", [
            _item("20311821", "37.64", brightness="low", power_source="battery", color="black"),
            _item("34298444", "44.12", brightness="medium", power_source="USB", color="white"),
            _item("51397210", "48.90", brightness="medium", power_source="AC", color="silver"),
            _item("66104842", "56.08", brightness="high", power_source="battery", color="black"),
            _item("72900429", "54.95", available=False, brightness="high", power_source="AC", color="white"),
        ]),
        _product(WATER_BOTTLE_PRODUCT_ID, "Water Bottle", [
            _item("13030521", "24.53", capacity="500ml", material="glass", color="blue"),
            _item("26625588", "29.90", capacity="750ml", material="stainless steel", color="black"),
            _item("40151002", "34.77", capacity="1000ml", material="stainless steel", color="red"),
            _item("54186936", "39.15", capacity="1000ml", material="glass", color="black"),
            _item("68750930", "19.30", available=False, capacity="1000ml", material="plastic", color="red"),
        ]),
        _product(SKATEBOARD_PRODUCT_ID, "Skateboard", [
            _item("21703680", "82.50", deck_material="bamboo", length="28 inch", design="plain"),
            _item("36153356", "109.99", deck_material="maple", length="31 inch", design="graphic"),
            _item("44543425", "124.18", deck_material="maple", length="34 inch", design="graphic"),
            _item("59510554", "95.00", deck_material="plastic", length="31 inch", design="custom"),
        ]),
        _product(LUGGAGE_PRODUCT_ID, "Luggage Set", [
            _item("17250327", "209.95", piece_count="2", color="red", material="hardshell"),
            _item("28401536", "259.30", piece_count="3", color="black", material="softshell"),
            _item("39014729", "312.75", piece_count="4", color="silver", material="hardshell"),
        ]),
        _product(BACKPACK_PRODUCT_ID, "Backpack", [
            _item("14550125", "41.90", size="small", material="polyester", color="grey"),
            _item("25436890", "49.45", size="medium", material="polyester", color="grey"),
            _item("36413724", "53.28", size="medium", material="nylon", color="navy"),
            _item("47128583", "88.60", size="large", material="leather", color="green"),
        ]),
        _product(LAPTOP_PRODUCT_ID, "Laptop", [
            _item("15025936", "899.00", screen_size="13-inch", processor="i5", ram="8GB", storage="256GB SSD"),
            _item("26730411", "1349.99", screen_size="15-inch", processor="i7", ram="16GB", storage="512GB SSD"),
            _item("37551302", "1399.00", screen_size="15-inch", processor="i7", ram="8GB", storage="1TB SSD"),
            _item("48206904", "1799.50", screen_size="17-inch", processor="i9", ram="32GB", storage="1TB SSD"),
        ]),
        _product(CAMERA_PRODUCT_ID, "Action Camera", [
            _item("16783921", "229.95", resolution="4K", waterproof="yes", color="black"),
            _item("27459126", "289.99", resolution="5K", waterproof="no", color="silver"),
            # Deliberate price tie: most-expensive must pick the smaller item id.
            _item("38510427", "319.00", resolution="5K", waterproof="yes", color="black"),
            _item("49018945", "319.00", resolution="5K", waterproof="yes", color="silver"),
        ]),
        _product(TSHIRT_PRODUCT_ID, "T-Shirt", [
            _item("10960317", "19.95", color="blue", size="M", material="cotton"),
            _item("21993373", "21.50", color="red", size="L", material="cotton"),
            _item("32840184", "18.20", color="black", size="XL", material="polyester"),
        ]),
    ]


def _users() -> list[User]:
    return [
        User(
            user_id="mei_kovacs_8020",
            first_name="Mei", last_name="Kovacs",
            email="mei.kovacs@example.com", zip="28236",
            default_address=Address("317 Elm Street", "Charlotte", "NC", "28236"),
            payment_methods=[
                PaymentMethod("paypal_7732922", "paypal"),
                PaymentMethod("gift_card_3824028", "gift_card"),
            ],
        ),
        User(
            user_id="ethan_garcia_1261",
            first_name="Ethan", last_name="Garcia",
            email="ethan.garcia@example.com", zip="80280",
            default_address=Address("991 Birch Avenue", "Denver", "CO", "80280"),
            payment_methods=[
                PaymentMethod("gift_card_4332117", "gift_card"),
                PaymentMethod("paypal_3398522", "paypal"),
            ],
        ),
        User(
            user_id="fatima_johnson_7581",
            first_name="Fatima", last_name="Johnson",
            email="fatima.johnson@example.com", zip="78712",
            default_address=Address("248 Cedar Lane", "Austin", "TX", "78712"),
            payment_methods=[PaymentMethod("credit_card_2929966", "credit_card")],
        ),
        User(
            user_id="noah_ito_3850",
            first_name="Noah", last_name="Ito",
            email="noah.ito@example.com", zip="98187",
            default_address=Address("144 Lakeview Drive", "Seattle", "WA", "98187"),
            payment_methods=[PaymentMethod("credit_card_1620755", "credit_card")],
        ),
        User(
            user_id="olivia_lopez_3865",
            first_name="Olivia", last_name="Lopez",
            email="olivia.lopez@example.com", zip="76171",
            default_address=Address("73 Prairie Road", "Fort Worth", "TX", "76171"),
            payment_methods=[PaymentMethod("gift_card_7711863", "gift_card")],
        ),
        User(
            user_id="isabella_johansson_2152",
            first_name="Isabella", last_name="Johansson",
            email="isabella.johansson@example.com", zip="32286",
            default_address=Address("509 Palm Court", "Jacksonville", "FL", "32286"),
            payment_methods=[PaymentMethod("paypal_3024827", "paypal")],
        ),
        # Collision pair: same first/last name and zip, distinct emails.
        User(
            user_id="james_kim_1316",
            first_name="James", last_name="Kim",
            email="james.kim.one@example.com", zip="94105",
            default_address=Address("12 Harbor Street", "San Francisco", "CA", "94105"),
            payment_methods=[PaymentMethod("credit_card_5902158", "credit_card")],
        ),
        User(
            user_id="james_kim_4873",
            first_name="James", last_name="Kim",
            email="james.kim.two@example.com", zip="94105",
            default_address=Address("48 Harbor Street, Apt 9", "San Francisco", "CA", "94105"),
            payment_methods=[PaymentMethod("paypal_8049715", "paypal")],
        ),
    ]


def _order(
    order_id: str,
    user: User,
    status: str,
    lines: list[tuple[str, str, int]],
    products: dict[str, Product],
    payment_method_id: str | None = None,
    post_delivery_action: str | None = None,
    cancellation_reason: str | None = None,
    address: Address | None = None,
) -> Order:
    line_items = [
        LineItem(
            item_id=item_id,
            product_id=product_id,
            quantity=qty,
            unit_price_cents=products[product_id].items[item_id].price_cents,
        )
        for item_id, product_id, qty in lines
    ]
    return Order(
        order_id=order_id,
        user_id=user.user_id,
        status=status,
        line_items=line_items,
        shipping_address=address or user.default_address,
        payment_method_id=payment_method_id or user.payment_methods[0].id,
        post_delivery_action=post_delivery_action,
        cancellation_reason=cancellation_reason,
    )


def build_seed_db() -> RetailDatabase:
    products = {p.product_id: p for p in _products()}
    users = {u.user_id: u for u in _users()}
    u = users

    orders = [
        # Ethan: the 4-line-item pending order driven by the upgrade walkthrough.
        _order(WALKTHROUGH_ORDER_ID, u["ethan_garcia_1261"], "pending", [
            ("19841307", SHOES_PRODUCT_ID, 1),
            ("55835374", JIGSAW_PRODUCT_ID, 1),
            ("34298444", DESK_LAMP_PRODUCT_ID, 1),
            ("26625588", WATER_BOTTLE_PRODUCT_ID, 1),
        ], products),
        _order("#W2702727", u["ethan_garcia_1261"], "delivered", [
            ("10960317", TSHIRT_PRODUCT_ID, 2),
        ], products),
        # Mei: delivered bottle+lamp (exchange/return material), one pending, one cancelled.
        _order("#W8255453", u["mei_kovacs_8020"], "delivered", [
            ("26625588", WATER_BOTTLE_PRODUCT_ID, 1),
            ("34298444", DESK_LAMP_PRODUCT_ID, 1),
        ], products),
        _order("#W3071263", u["mei_kovacs_8020"], "pending", [
            ("25436890", BACKPACK_PRODUCT_ID, 1),
        ], products),
        _order("#W4073673", u["mei_kovacs_8020"], "cancelled", [
            ("21993373", TSHIRT_PRODUCT_ID, 1),
        ], products, cancellation_reason="no longer needed"),
        _order("#W6390527", u["mei_kovacs_8020"], "delivered", [
            ("21993373", TSHIRT_PRODUCT_ID, 1),
        ], products),
        # Fatima: two pending orders (cancel-all task) plus one delivered.
        _order("#W1308726", u["fatima_johnson_7581"], "pending", [
            ("16783921", CAMERA_PRODUCT_ID, 1),
        ], products),
        _order("#W6721852", u["fatima_johnson_7581"], "pending", [
            ("32840184", TSHIRT_PRODUCT_ID, 3),
        ], products),
        _order("#W9519981", u["fatima_johnson_7581"], "delivered", [
            ("28401536", LUGGAGE_PRODUCT_ID, 1),
        ], products),
        # Noah: delivered laptop (exchange material), already-returned order, one pending.
        _order("#W6310710", u["noah_ito_3850"], "delivered", [
            ("26730411", LAPTOP_PRODUCT_ID, 1),
            ("14550125", BACKPACK_PRODUCT_ID, 1),
        ], products),
        _order("#W7242815", u["noah_ito_3850"], "delivered", [
            ("10960317", TSHIRT_PRODUCT_ID, 1),
        ], products, post_delivery_action="returned"),
        _order("#W4967593", u["noah_ito_3850"], "pending", [
            ("51397210", DESK_LAMP_PRODUCT_ID, 1),
        ], products),
        # Olivia: pending skateboard (modify-items + address ordering task),
        # plus an already-exchanged delivered order.
        _order("#W2260828", u["olivia_lopez_3865"], "pending", [
            ("36153356", SKATEBOARD_PRODUCT_ID, 1),
        ], products),
        _order("#W8632528", u["olivia_lopez_3865"], "delivered", [
            ("13030521", WATER_BOTTLE_PRODUCT_ID, 1),
        ], products, post_delivery_action="exchanged"),
        # Isabella: delivered 1500-piece animals/intermediate puzzle (query-tool
        # reasoning material) and one pending puzzle.
        _order("#W1539823", u["isabella_johansson_2152"], "delivered", [
            ("55835374", JIGSAW_PRODUCT_ID, 1),
            ("13030521", WATER_BOTTLE_PRODUCT_ID, 1),
        ], products),
        _order("#W9284598", u["isabella_johansson_2152"], "pending", [
            ("47261503", JIGSAW_PRODUCT_ID, 1),
        ], products),
        # The two James Kims.
        _order("#W4478938", u["james_kim_1316"], "pending", [
            ("15025936", LAPTOP_PRODUCT_ID, 1),
        ], products),
        _order("#W6893533", u["james_kim_1316"], "delivered", [
            ("27459126", CAMERA_PRODUCT_ID, 1),
        ], products),
        _order("#W7012973", u["james_kim_4873"], "pending", [
            ("17250327", LUGGAGE_PRODUCT_ID, 1),
        ], products),
        _order("#W3657213", u["james_kim_4873"], "cancelled", [
            ("13030521", WATER_BOTTLE_PRODUCT_ID, 1),
        ], products, cancellation_reason="ordered by mistake"),
    ]

    db = RetailDatabase(
        users=users,
        products=products,
        orders={o.order_id: o for o in orders},
        revision=0,
    )
    db.validate()
    return db
