import type { App } from "../app.js";
import { el } from "../dom.js";
import { formatWhen } from "../format.js";

export async function renderProfile(app: App): Promise<void> {
  if (!app.api.authenticated) {
    app.navigate("#/login");
    return;
  }
  const profile = await app.api.profile();
  const coins = await app.api.coins();

  const email = el("input", { name: "email", value: profile.email });
  const saved = el("span", { "data-testid": "profile-saved" });
  app.main.append(
    el("h2", {}, `Profile: ${profile.username}`),
    el("p", {}, `Role: ${profile.role}`),
    el(
      "form",
      {
        onsubmit: async (ev) => {
          ev.preventDefault();
          await app.api.updateProfile({ email: email.value });
          saved.textContent = "Saved.";
        },
      },
      el("label", {}, "Email: ", email),
      el("button", { type: "submit" }, "Save"),
      saved,
    ),
  );

  app.main.append(
    el("h3", {}, "Coins"),
    el(
      "p",
      { "data-testid": "coin-balance" },
      `Balance: ${coins.balance} coins`,
    ),
  );
  const table = el(
    "table",
    { "data-testid": "coin-ledger" },
    el(
      "tr",
      {},
      el("th", {}, "when"),
      el("th", {}, "change"),
      el("th", {}, "reason"),
    ),
  );
  for (const txn of coins.ledger) {
    table.append(
      el(
        "tr",
        {},
        el("td", {}, formatWhen(txn.created_at)),
        el("td", {}, txn.delta > 0 ? `+${txn.delta}` : String(txn.delta)),
        el("td", {}, txn.reason),
      ),
    );
  }
  app.main.append(table);
}
