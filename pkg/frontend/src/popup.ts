import type { ApplicantDetail } from "./types.js";

export interface PopupLine {
  type: string;
  value: string;
}

/** Pop-up body for a clicked applicant: the server payload, verbatim and in
 * server order. */
export function popupLines(detail: ApplicantDetail): PopupLine[] {
  return detail.attributes.map((a) => ({ type: a.type, value: a.value }));
}

export function popupTitle(detail: ApplicantDetail): string {
  return `${detail.label} (FY ${detail.year})`;
}

export function renderPopup(container: HTMLElement, detail: ApplicantDetail): void {
  container.innerHTML = "";
  const title = document.createElement("div");
  title.className = "popup-title";
  title.textContent = popupTitle(detail);
  container.appendChild(title);
  const list = document.createElement("ul");
  for (const line of popupLines(detail)) {
    const item = document.createElement("li");
    item.textContent = `${line.type}: ${line.value}`;
    list.appendChild(item);
  }
  container.appendChild(list);
  container.style.display = "block";
}

export function hidePopup(container: HTMLElement): void {
  container.style.display = "none";
}
