// End-to-end flows against a real API server spawned for this file.
// Each phase drives the app through the DOM, never through the client
// object directly, except where a second actor induces a conflict.

import { describe, it, expect, beforeAll, afterAll } from "vitest";
import { spawn, ChildProcess } from "node:child_process";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";
import { App } from "../src/app.js";
import { ApiClient } from "../src/api.js";

const PORT = 18000 + Math.floor(Math.random() * 2000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function waitFor<T>(fn: () => T | null | undefined, ms = 8000): Promise<T> {
  const deadline = Date.now() + ms;
  for (;;) {
    try {
      const value = fn();
      if (value !== null && value !== undefined && value !== false)
        return value as T;
    } catch {
      // keep polling
    }
    if (Date.now() > deadline) throw new Error("timed out waiting");
    await new Promise((r) => setTimeout(r, 25));
  }
}

function makeApp(): { app: App; root: HTMLElement } {
  const root = document.createElement("div");
  document.body.append(root);
  return { app: new App(root, BASE), root };
}

async function go(app: App, hash: string): Promise<void> {
  window.location.hash = hash;
  await app.render();
}

function q<T extends HTMLElement>(root: HTMLElement, testid: string): T {
  const node = root.querySelector<T>(`[data-testid="${testid}"]`);
  if (!node) throw new Error(`no element with data-testid=${testid}`);
  return node;
}

function fill(form: HTMLElement, name: string, value: string): void {
  const input = form.querySelector<HTMLInputElement>(`[name="${name}"]`);
  if (!input) throw new Error(`no field ${name}`);
  input.value = value;
}

function submit(form: HTMLElement): void {
  form.dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
}

beforeAll(async () => {
  const here = dirname(fileURLToPath(import.meta.url));
  server = spawn("python3", [join(here, "server.py"), String(PORT)], {
    stdio: ["ignore", "inherit", "inherit"],
  });
  const deadline = Date.now() + 20000;
  for (;;) {
    try {
      const res = await fetch(`${BASE}/api/policy`);
      if (res.ok) break;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error("API server did not start");
    await new Promise((r) => setTimeout(r, 200));
  }
}, 30000);

afterAll(() => {
  server?.kill();
});

describe("user journey", () => {
  const { app, root } = makeApp();

  it("registers through the UI", async () => {
    await go(app, "#/register");
    const form = q(root, "register-form");
    fill(form, "username", "moviefan");
    fill(form, "email", "fan@example.com");
    fill(form, "password", "super-secret-1");
    submit(form);
    await waitFor(() => root.querySelector('[data-testid="logout"]'));
    expect(app.api.authenticated).toBe(true);
  });

  it("browses the catalog from home", async () => {
    await go(app, "#/");
    const results = await waitFor(() =>
      q(root, "results").querySelector('[data-testid="movie-1"]'),
    );
    expect(results.textContent).toContain("The Grand Premiere");
  });

  it("shows movie detail with showtimes", async () => {
    await go(app, "#/movie/1");
    const list = q(root, "show-list");
    expect(list.textContent).toContain("Pick seats");
    expect(q(root, "movie-rating").textContent).toContain("No ratings yet");
  });

  it("picks two seats and books at the server-quoted price", async () => {
    await go(app, "#/seats/1");
    q<HTMLButtonElement>(root, "seat-A1").click();
    q<HTMLButtonElement>(root, "seat-A2").click();
    q<HTMLButtonElement>(root, "continue").click();

    const summary = await waitFor(() =>
      root.querySelector('[data-testid="quote-summary"]'),
    );
    // Values rendered straight from the server's quote payload.
    expect(summary.textContent).toContain("Subtotal: INR 500.00");
    expect(q(root, "quote-total").textContent).toBe("Total: INR 500.00");

    q<HTMLButtonElement>(root, "confirm-booking").click();
    const confirmation = await waitFor(() =>
      root.querySelector('[data-testid="confirmation"]'),
    );
    expect(confirmation.textContent).toContain("seats A1, A2");
    expect(confirmation.textContent).toContain("paid INR 500.00");
    expect(q(root, "coin-balance").textContent).toContain("2");
  });

  it("booked seats show as sold on a fresh grid", async () => {
    await go(app, "#/seats/1");
    expect(q<HTMLButtonElement>(root, "seat-A1").disabled).toBe(true);
    expect(q<HTMLButtonElement>(root, "seat-A2").disabled).toBe(true);
    expect(q<HTMLButtonElement>(root, "seat-A3").disabled).toBe(false);
  });

  it("posts a review and renders the sentiment chip and new balance", async () => {
    await go(app, "#/movie/1");
    const form = q(root, "review-form");
    const text = form.querySelector<HTMLTextAreaElement>('[name="text"]');
    text!.value = "great movie";
    submit(form);
    const chip = await waitFor(() =>
      root.querySelector('[data-testid="sentiment-chip"]'),
    );
    expect(chip.textContent).toBe("positive");
    // 2 coins from the 2-seat booking plus 5 from the review.
    expect(q(root, "coin-balance").textContent).toBe("7");
  });

  it("surfaces a duplicate review inline", async () => {
    await go(app, "#/movie/1");
    const form = q(root, "review-form");
    form.querySelector<HTMLTextAreaElement>('[name="text"]')!.value = "again";
    submit(form);
    await waitFor(() =>
      q(root, "review-outcome").textContent?.includes("already reviewed"),
    );
  });

  it("lists the booking with a cancel control", async () => {
    await go(app, "#/bookings");
    const entry = q(root, "booking-1");
    expect(entry.textContent).toContain("A1, A2");
    expect(entry.textContent).toContain("active");
  });

  it("shows coin ledger on the profile page", async () => {
    await go(app, "#/profile");
    expect(q(root, "coin-balance").textContent).toContain("7");
    const ledger = q(root, "coin-ledger");
    expect(ledger.querySelectorAll("tr").length).toBeGreaterThanOrEqual(3);
  });

  it("rejects direct navigation to admin pages", async () => {
    await go(app, "#/admin/reports");
    expect(q(root, "forbidden").textContent).toContain("Admin access required");
    await go(app, "#/admin/catalog");
    expect(q(root, "forbidden").textContent).toContain("Admin access required");
  });
});

describe("conflict handling", () => {
  it("on 409 the checkout returns to a fresh grid with the seat flagged", async () => {
    const { app, root } = makeApp();
    await app.api.register("rival-watcher", "rival@example.com", "pw-12345678");
    await app.api.login("rival-watcher", "pw-12345678");
    app.refreshNav();

    await go(app, "#/seats/1");
    q<HTMLButtonElement>(root, "seat-B1").click();
    q<HTMLButtonElement>(root, "continue").click();
    await waitFor(() => root.querySelector('[data-testid="quote-summary"]'));

    // A second actor grabs B1 between quote and confirm.
    const rival = new ApiClient(BASE);
    await rival.register("sniper", "sniper@example.com", "pw-12345678");
    await rival.login("sniper", "pw-12345678");
    await rival.book(1, ["B1"], 0);

    q<HTMLButtonElement>(root, "confirm-booking").click();
    const banner = await waitFor(() =>
      root.querySelector('[data-testid="conflict-banner"]'),
    );
    expect(banner.textContent).toContain("B1");
    expect(q<HTMLButtonElement>(root, "seat-B1").disabled).toBe(true);
    expect(
      q<HTMLButtonElement>(root, "seat-B1").classList.contains("conflict"),
    ).toBe(true);
  });
});

describe("admin journey", () => {
  const { app, root } = makeApp();

  it("logs in as admin and reaches the admin pages", async () => {
    await go(app, "#/login");
    const form = q(root, "login-form");
    fill(form, "username", "admin");
    fill(form, "password", "e2e-admin-pw");
    submit(form);
    await waitFor(() => root.querySelector('[data-testid="logout"]'));
    expect(app.api.isAdmin).toBe(true);
  });

  it("creates a venue and a show through the forms", async () => {
    await go(app, "#/admin/catalog");
    const venueForm = q(root, "venue-form");
    fill(venueForm, "name", "Studio Two");
    fill(venueForm, "address", "2 Annex");
    fill(venueForm, "rows", "1");
    fill(venueForm, "cols", "2");
    submit(venueForm);
    await waitFor(() =>
      q(root, "venue-status").textContent?.includes("Created venue #2"),
    );

    const showForm = q(root, "show-form");
    fill(showForm, "movie_id", "1");
    fill(showForm, "venue_id", "2");
    fill(showForm, "starts_at", String(Date.now() + 3 * 86_400_000));
    fill(showForm, "price_minor", "15000");
    submit(showForm);
    await waitFor(() =>
      q(root, "show-status").textContent?.includes("Created show #2"),
    );
  });

  it("renders the sales report", async () => {
    await go(app, "#/admin/reports");
    const table = await waitFor(() =>
      root.querySelector('[data-testid="report-table"]'),
    );
    expect(table.textContent).toContain("The Grand Premiere");
  });
});

describe("booking the admin-created show", () => {
  const { app, root } = makeApp();

  it("a regular user books the new show", async () => {
    await go(app, "#/login");
    const form = q(root, "login-form");
    fill(form, "username", "moviefan");
    fill(form, "password", "super-secret-1");
    submit(form);
    await waitFor(() => root.querySelector('[data-testid="logout"]'));

    await go(app, "#/seats/2");
    q<HTMLButtonElement>(root, "seat-A1").click();
    q<HTMLButtonElement>(root, "continue").click();
    await waitFor(() => root.querySelector('[data-testid="quote-summary"]'));
    q<HTMLButtonElement>(root, "confirm-booking").click();
    const confirmation = await waitFor(() =>
      root.querySelector('[data-testid="confirmation"]'),
    );
    expect(confirmation.textContent).toContain("paid INR 150.00");
  });

  it("the last seat sold flips the grid to houseful", async () => {
    // The 1x2 venue has one seat left; take it, then revisit.
    await go(app, "#/seats/2");
    q<HTMLButtonElement>(root, "seat-A2").click();
    q<HTMLButtonElement>(root, "continue").click();
    await waitFor(() => root.querySelector('[data-testid="quote-summary"]'));
    q<HTMLButtonElement>(root, "confirm-booking").click();
    await waitFor(() => root.querySelector('[data-testid="confirmation"]'));

    await go(app, "#/seats/2");
    expect(q(root, "houseful-banner").textContent).toBe("Houseful");
    const buttons = q(root, "seat-grid").querySelectorAll("button");
    for (const btn of buttons) expect(btn.disabled).toBe(true);
  });

  it("cancelling refunds and updates the row in place", async () => {
    await go(app, "#/bookings");
    const cancel = await waitFor(() =>
      root.querySelector<HTMLButtonElement>('[data-testid^="cancel-"]'),
    );
    cancel.click();
    await waitFor(() =>
      q(root, "booking-list").textContent?.includes("Refunded"),
    );
  });
});
