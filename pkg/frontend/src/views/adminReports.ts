import type { App } from "../app.js";
import { el, clear } from "../dom.js";
import { ApiError } from "../api.js";

const REPORTS = ["sales", "occupancy", "activity", "sentiment"] as const;

function tableFor(rows: Record<string, unknown>[]): HTMLElement {
  if (rows.length === 0) return el("p", {}, "No rows.");
  const keys = Object.keys(rows[0]);
  const table = el(
    "table",
    { "data-testid": "report-table" },
    el("tr", {}, ...keys.map((k) => el("th", {}, k))),
  );
  for (const row of rows) {
    table.append(
      el("tr", {}, ...keys.map((k) => el("td", {}, String(row[k] ?? "")))),
    );
  }
  return table;
}

export async function renderAdminReports(app: App): Promise<void> {
  app.main.append(el("h2", {}, "Admin: reports"));

  const picker = el("select", { name: "report" });
  for (const name of REPORTS) picker.append(el("option", { value: name }, name));
  const from = el("input", { name: "from", placeholder: "from (epoch ms)" });
  const to = el("input", { name: "to", placeholder: "to (epoch ms)" });
  const subject = el("input", {
    name: "subject",
    placeholder: "venue id (occupancy) / movie id (sentiment)",
  });
  const output = el("div", { "data-testid": "report-output" });

  async function load(): Promise<void> {
    clear(output);
    const name = picker.value as (typeof REPORTS)[number];
    const params: Record<string, string | number> = {};
    if (name === "sales" || name === "activity") {
      params.from_ms = from.value || "0";
      params.to_ms = to.value || String(Date.now() + 365 * 86_400_000);
    }
    if (name === "sales") params.group_by = "movie";
    if (name === "occupancy") params.venue_id = subject.value || "1";
    if (name === "sentiment") params.movie_id = subject.value || "1";
    try {
      const report = await app.api.adminReport(name, params);
      const rows = (report.rows ?? report.most_negative ?? []) as Record<
        string,
        unknown
      >[];
      output.append(tableFor(rows));
      if (report.totals) {
        output.append(
          el(
            "p",
            { "data-testid": "report-totals" },
            JSON.stringify(report.totals),
          ),
        );
      }
    } catch (e) {
      output.append(
        el(
          "p",
          { class: "error" },
          e instanceof ApiError ? e.message : String(e),
        ),
      );
    }
  }

  app.main.append(
    el(
      "form",
      {
        onsubmit: (ev) => {
          ev.preventDefault();
          void load();
        },
      },
      picker,
      from,
      to,
      subject,
      el("button", { type: "submit" }, "Load"),
    ),
    output,
  );
  await load();
}
