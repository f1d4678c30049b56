// Display formatting only. All amounts arrive from the server in minor
// units and are shown as-is after unit conversion; no pricing rules here.

export function formatMoney(minor: number, currency: string): string {
  const major = (minor / 100).toFixed(2);
  return `${currency} ${major}`;
}

export function formatWhen(epochMs: number): string {
  return new Date(epochMs).toLocaleString();
}
