/** Session controls: a password-change form behind a header button. */

import { ApiError, Client } from "./api.js";
import { h } from "./dom.js";

export function createAccountControls(api: Client): HTMLElement {
  const oldInput = h("input", {
    type: "password",
    placeholder: "current password",
    autocomplete: "current-password",
  }) as HTMLInputElement;
  const newInput = h("input", {
    type: "password",
    placeholder: "new password",
    autocomplete: "new-password",
  }) as HTMLInputElement;
  const message = h("span", { class: "password-message" });
  const form = h(
    "form",
    { class: "password-form", hidden: true },
    oldInput,
    newInput,
    h("button", { type: "submit" }, "Apply"),
    message,
  );
  const toggle = h("button", { type: "button" }, "Password");
  toggle.addEventListener("click", () => {
    form.hidden = !form.hidden;
    message.textContent = "";
  });

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    message.textContent = "";
    void api
      .changePassword(oldInput.value, newInput.value)
      .then(() => {
        message.textContent = "password changed";
        oldInput.value = "";
        newInput.value = "";
      })
      .catch((err: unknown) => {
        message.textContent =
          err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
      });
  });

  return h("span", { class: "account-controls" }, toggle, form);
}
