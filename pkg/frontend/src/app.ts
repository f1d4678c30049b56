import { ApiClient } from "./api.js";
import { apiBaseUrl } from "./config.js";
import { el, clear } from "./dom.js";
import { parseHash } from "./router.js";
import { renderLogin, renderRegister } from "./views/auth.js";
import { renderHome } from "./views/home.js";
import { renderMovie } from "./views/movie.js";
import { renderVenue } from "./views/venue.js";
import { renderSeats } from "./views/seats.js";
import { renderCheckout } from "./views/checkout.js";
import { renderBookings } from "./views/bookings.js";
import { renderProfile } from "./views/profile.js";
import { renderAdminCatalog } from "./views/adminCatalog.js";
import { renderAdminReports } from "./views/adminReports.js";

export class App {
  api: ApiClient;
  main: HTMLElement;
  private nav: HTMLElement;

  constructor(root: HTMLElement, baseUrl: string = apiBaseUrl()) {
    this.api = new ApiClient(baseUrl);
    this.nav = el("nav", { "data-testid": "nav" });
    this.main = el("main", { "data-testid": "main" });
    clear(root);
    root.append(el("h1", {}, "stageseat"), this.nav, this.main);
    this.refreshNav();
  }

  start(): void {
    window.addEventListener("hashchange", () => void this.render());
    void this.render();
  }

  navigate(hash: string): void {
    if (window.location.hash === hash) {
      void this.render();
    } else {
      window.location.hash = hash;
      // jsdom and some browsers fire hashchange asynchronously; render
      // directly so navigation is immediate either way.
      void this.render();
    }
  }

  refreshNav(): void {
    clear(this.nav);
    this.nav.append(
      el("a", { href: "#/" }, "Home"),
      " ",
      el("a", { href: "#/bookings" }, "My bookings"),
      " ",
      el("a", { href: "#/profile" }, "Profile"),
      " ",
    );
    if (this.api.isAdmin) {
      this.nav.append(
        el("a", { href: "#/admin/catalog" }, "Admin catalog"),
        " ",
        el("a", { href: "#/admin/reports" }, "Admin reports"),
        " ",
      );
    }
    if (this.api.authenticated) {
      this.nav.append(
        el(
          "button",
          {
            "data-testid": "logout",
            onclick: () => {
              this.api.logout();
              this.refreshNav();
              this.navigate("#/");
            },
          },
          `Sign out (${this.api.username})`,
        ),
      );
    } else {
      this.nav.append(el("a", { href: "#/login" }, "Sign in"));
    }
  }

  async render(): Promise<void> {
    const route = parseHash(window.location.hash);
    clear(this.main);
    try {
      switch (route.name) {
        case "home":
          await renderHome(this);
          break;
        case "login":
          renderLogin(this);
          break;
        case "register":
          renderRegister(this);
          break;
        case "movie":
          await renderMovie(this, Number(route.params[0]));
          break;
        case "venue":
          await renderVenue(this, Number(route.params[0]));
          break;
        case "seats": {
          const conflict = route.query.get("conflict");
          await renderSeats(
            this,
            Number(route.params[0]),
            conflict ? conflict.split(",") : [],
          );
          break;
        }
        case "checkout": {
          const seats = route.query.get("seats");
          await renderCheckout(
            this,
            Number(route.params[0]),
            seats ? seats.split(",") : [],
          );
          break;
        }
        case "bookings":
          await renderBookings(this);
          break;
        case "profile":
          await renderProfile(this);
          break;
        case "admin":
          if (!this.api.isAdmin) {
            // Mirrors the API's 403: non-admin sessions get no admin UI,
            // whether they navigated here or typed the URL.
            this.main.append(
              el(
                "p",
                { class: "error", "data-testid": "forbidden" },
                "Admin access required.",
              ),
            );
            break;
          }
          if (route.params[0] === "reports") {
            await renderAdminReports(this);
          } else {
            await renderAdminCatalog(this);
          }
          break;
        default:
          this.main.append(el("p", {}, "Page not found."));
      }
    } catch (e) {
      this.main.append(
        el(
          "p",
          { class: "error", "data-testid": "page-error" },
          e instanceof Error ? e.message : String(e),
        ),
      );
    }
  }
}

export function mount(root: HTMLElement, baseUrl?: string): App {
  const app = new App(root, baseUrl);
  app.start();
  return app;
}
