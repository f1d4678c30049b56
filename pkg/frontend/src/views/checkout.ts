import type { App } from "../app.js";
import { el } from "../dom.js";
import { ApiError } from "../api.js";
import { formatMoney } from "../format.js";

export async function renderCheckout(
  app: App,
  showId: number,
  seatLabels: string[],
): Promise<void> {
  if (!app.api.authenticated) {
    app.navigate("#/login");
    return;
  }
  if (seatLabels.length === 0) {
    app.navigate(`#/seats/${showId}`);
    return;
  }

  // Every number shown here comes from the server's quote; the slider
  // just re-asks with a different coin count.
  let quote = await app.api.quote(showId, seatLabels.length, 0);

  const slider = el("input", {
    type: "range",
    name: "coins",
    min: "0",
    max: String(quote.max_redeemable_coins),
    value: "0",
    "data-testid": "coin-slider",
  });
  const summary = el("div", { "data-testid": "quote-summary" });
  const outcome = el("div", { "data-testid": "booking-outcome" });

  function renderSummary(): void {
    summary.replaceChildren(
      el("p", {}, `Seats: ${seatLabels.join(", ")}`),
      el(
        "p",
        { "data-testid": "quote-subtotal" },
        `Subtotal: ${formatMoney(quote.subtotal_minor, quote.currency)}`,
      ),
      el(
        "p",
        { "data-testid": "quote-discount" },
        `Coins applied: ${quote.coins_redeemed} ` +
          `(${formatMoney(quote.discount_minor, quote.currency)} off)`,
      ),
      el(
        "p",
        { "data-testid": "quote-total" },
        `Total: ${formatMoney(quote.total_minor, quote.currency)}`,
      ),
    );
  }
  renderSummary();

  slider.addEventListener("change", async () => {
    quote = await app.api.quote(showId, seatLabels.length, Number(slider.value));
    renderSummary();
  });

  const confirm = el(
    "button",
    {
      "data-testid": "confirm-booking",
      onclick: async () => {
        try {
          const booking = await app.api.book(
            showId,
            seatLabels,
            quote.coins_redeemed,
          );
          outcome.replaceChildren(
            el("h3", {}, "Booking confirmed"),
            el(
              "p",
              { "data-testid": "confirmation" },
              `Booking #${booking.booking_id}: seats ` +
                `${booking.seats.join(", ")}, paid ` +
                `${formatMoney(booking.paid_minor, booking.currency)}.`,
            ),
            el(
              "p",
              { "data-testid": "coin-balance" },
              `Coin balance: ${booking.coin_balance}`,
            ),
            el("a", { href: "#/bookings" }, "My bookings"),
          );
        } catch (e) {
          if (e instanceof ApiError && e.status === 409) {
            // Conflict: someone booked a seat meanwhile. Back to a fresh
            // grid with the contested seats flagged.
            app.navigate(
              `#/seats/${showId}?conflict=${seatLabels.join(",")}`,
            );
            return;
          }
          outcome.replaceChildren(
            el(
              "p",
              { class: "error", "data-testid": "booking-error" },
              e instanceof ApiError ? e.message : String(e),
            ),
          );
        }
      },
    },
    "Confirm booking",
  );

  app.main.append(
    el("h2", {}, "Checkout"),
    summary,
    el("label", {}, "Redeem coins: ", slider),
    confirm,
    outcome,
  );
}
