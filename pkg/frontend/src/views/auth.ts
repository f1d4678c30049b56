import type { App } from "../app.js";
import { el } from "../dom.js";
import { ApiError } from "../api.js";

export function renderLogin(app: App): void {
  const username = el("input", { name: "username", placeholder: "username" });
  const password = el("input", {
    name: "password",
    type: "password",
    placeholder: "password",
  });
  const error = el("p", { class: "error", "data-testid": "login-error" });

  const form = el(
    "form",
    {
      "data-testid": "login-form",
      onsubmit: async (ev) => {
        ev.preventDefault();
        try {
          await app.api.login(username.value, password.value);
          app.refreshNav();
          app.navigate("#/");
        } catch (e) {
          error.textContent = e instanceof ApiError ? e.message : String(e);
        }
      },
    },
    el("h2", {}, "Sign in"),
    username,
    password,
    el("button", { type: "submit" }, "Sign in"),
    error,
  );
  app.main.append(form);
  app.main.append(
    el("p", {}, "No account yet? ", el("a", { href: "#/register" }, "Register")),
  );
}

export function renderRegister(app: App): void {
  const username = el("input", { name: "username", placeholder: "username" });
  const email = el("input", { name: "email", placeholder: "email" });
  const password = el("input", {
    name: "password",
    type: "password",
    placeholder: "password (8+ characters)",
  });
  const error = el("p", { class: "error", "data-testid": "register-error" });

  const form = el(
    "form",
    {
      "data-testid": "register-form",
      onsubmit: async (ev) => {
        ev.preventDefault();
        try {
          await app.api.register(username.value, email.value, password.value);
          await app.api.login(username.value, password.value);
          app.refreshNav();
          app.navigate("#/");
        } catch (e) {
          error.textContent = e instanceof ApiError ? e.message : String(e);
        }
      },
    },
    el("h2", {}, "Create account"),
    username,
    email,
    password,
    el("button", { type: "submit" }, "Register"),
    error,
  );
  app.main.append(form);
}
